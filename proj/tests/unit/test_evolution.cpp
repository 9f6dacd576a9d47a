#include <doctest.h>

#include <random>

#include "spi/error.hpp"
#include "spi/evolution.hpp"
#include "test_support.hpp"

using namespace spi;
using namespace spi::test;

namespace {

// u^2 (1 - u)^2 on (0, 1) as a polynomial in x.
PiecewiseExpPoly unit_bump() {
  return PiecewiseExpPoly::from_atoms(make({{0, 1}}), {{{0.0, {0.0, 0.0, 1.0, -2.0, 1.0}}}});
}

struct Example {
  IntervalUnion omega;
  BoundaryMatrix b;
};

std::vector<Example> examples() {
  std::mt19937_64 rng(99);
  return {{make({{0, 1}}), BoundaryMatrix::identity(1)},
          {make({{0, 1}, {2, 3}}), half_turn_root()},
          {make({{0, 1}, {2, 3}}), swap2()},
          {make({{0, 0.7}, {1.1, 2.3}, {2.9, 3.4}}), random_unitary(3, rng)},
          {make({{-1, -0.2}, {0.3, 1.5}}), random_unitary(2, rng)}};
}

}  // namespace

TEST_CASE("single interval wrap-around") {
  auto f = unit_bump();
  auto omega = f.domain();
  auto b = BoundaryMatrix::identity(1);
  auto r = apply_U_paths(omega, b, 0.3, f);
  for (int k = 0; k < 200; ++k) {
    const double x = (k + 0.5) / 200.0;
    const double src = x < 0.7 ? x + 0.3 : x + 0.3 - 1.0;
    CHECK(std::abs(r.function(x) - f(src)) < 1e-12);
  }
  REQUIRE(r.refinement.size() == 1);
  CHECK(r.refinement[0].size() == 2);
  CHECK(r.refinement[0][0].hi == doctest::Approx(0.7));

  // whole turns return f
  auto full = apply_U_paths(omega, b, 3.0, f);
  CHECK(max_abs_difference(full.function, f) < 1e-12);
}

TEST_CASE("time zero is the identity on atoms") {
  std::mt19937_64 rng(1);
  for (const auto& ex : examples()) {
    auto f = random_domain_function(ex.omega, ex.b, rng);
    auto r = apply_U_paths(ex.omega, ex.b, 0.0, f);
    for (std::size_t i = 0; i < ex.omega.size(); ++i) {
      REQUIRE(r.function.pieces(i).size() == f.pieces(i).size());
      for (std::size_t k = 0; k < f.pieces(i).size(); ++k) {
        const auto& a = r.function.pieces(i)[k];
        const auto& c = f.pieces(i)[k];
        REQUIRE(a.atoms.size() == c.atoms.size());
        for (std::size_t m = 0; m < a.atoms.size(); ++m) {
          CHECK(a.atoms[m].frequency == c.atoms[m].frequency);
          CHECK(a.atoms[m].poly == c.atoms[m].poly);
        }
      }
    }
  }
}

TEST_CASE("eigenfunction picks up its phase") {
  auto omega = make({{0, 1}, {2, 3}});
  auto f = PiecewiseExpPoly::eigenfunction(omega, 0.25, CVector::Ones(2));
  auto r = apply_U_paths(omega, half_turn_root(), 1.0, f);
  CHECK(max_abs_difference(r.function, f.scaled(I)) < 1e-12);
}

TEST_CASE("path evolution agrees with the spectral oracle") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> tdist(-3.0, 3.0);
  std::normal_distribution<double> g(0, 1);
  for (const auto& ex : examples()) {
    auto spec = best_spectrum(ex.omega, ex.b, {-3, 3});
    REQUIRE(spec.points.size() >= 2);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<EigenTerm> terms;
      for (int k = 0; k < 3; ++k) {
        const auto& p = spec.points[std::uniform_int_distribution<std::size_t>(0, spec.points.size() - 1)(rng)];
        terms.push_back({p.lambda, p.basis.front(), {g(rng), g(rng)}});
      }
      auto f = eigen_combination(ex.omega, terms);
      const double t = tdist(rng);
      auto oracle = apply_U_spectral(ex.omega, spec, t, terms);
      auto paths = apply_U_paths(ex.omega, ex.b, t, f).function;
      // 100-point grid on omega, away from interval endpoints
      double worst = 0.0;
      for (int k = 0; k < 100; ++k) {
        const double m = (k + 0.5) / 100.0 * ex.omega.measure();
        double acc = 0.0;
        for (std::size_t i = 0; i < ex.omega.size(); ++i) {
          if (m < acc + ex.omega.length(i)) {
            const double x = ex.omega.alpha(i) + (m - acc);
            worst = std::max(worst, std::abs(paths(x) - oracle(x)));
            break;
          }
          acc += ex.omega.length(i);
        }
      }
      CHECK(worst < 1e-10);
    }
  }
}

TEST_CASE("spectral oracle rejects non-eigenfunctions") {
  auto omega = make({{0, 1}, {2, 3}});
  auto spec = best_spectrum(omega, half_turn_root(), {-2, 2});
  CVector c(2);
  c << 1.0, -1.0;
  try {
    apply_U_spectral(omega, spec, 1.0, {{0.25, c, 1.0}});
    FAIL("expected NotEigenCombination");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotEigenCombination);
  }
  try {
    apply_U_spectral(omega, spec, 1.0, {{0.3, CVector::Ones(2), 1.0}});
    FAIL("expected NotEigenCombination");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotEigenCombination);
  }
  // t and -t compose to the identity
  std::vector<EigenTerm> terms{{0.25, CVector::Ones(2), 1.0}, {-0.75, CVector::Ones(2), I}};
  auto f = eigen_combination(omega, terms);
  auto fwd = apply_U_spectral(omega, spec, 0.7, terms);
  auto back = apply_U_paths(omega, half_turn_root(), -0.7, fwd);
  CHECK(max_abs_difference(back.function, f) < 1e-12);
}

TEST_CASE("unitarity, group law and domain invariance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> tdist(-2.5, 2.5);
  for (const auto& ex : examples()) {
    for (int trial = 0; trial < 8; ++trial) {
      auto f = random_domain_function(ex.omega, ex.b, rng);
      CHECK(boundary_condition_check(ex.b, f, 1e-10));
      const double s = tdist(rng), t = tdist(rng);
      auto ut = apply_U_paths(ex.omega, ex.b, t, f).function;
      CHECK(std::abs(norm(ut) - norm(f)) < 1e-9 * std::max(1.0, norm(f)));
      CHECK(boundary_defect(ex.b, ut) < 1e-8);
      auto us_ut = apply_U_paths(ex.omega, ex.b, s, ut).function;
      auto ust = apply_U_paths(ex.omega, ex.b, s + t, f).function;
      CHECK(max_abs_difference(us_ut, ust) < 1e-9);
    }
  }
}

TEST_CASE("pointwise path sums match the closed-form evolution") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> tdist(-3.0, 3.0);
  for (const auto& ex : examples()) {
    auto f = random_domain_function(ex.omega, ex.b, rng);
    const double t = tdist(rng);
    auto r = apply_U_paths(ex.omega, ex.b, t, f);
    for (double x : probe_points(r.function, 8)) CHECK(std::abs(evaluate_U_at(ex.omega, ex.b, t, f, x) - r.function(x)) < 1e-10);
  }
}

TEST_CASE("interior translation is exact") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& ex : examples()) {
    auto f = random_domain_function(ex.omega, ex.b, rng);
    for (int k = 0; k < 20; ++k) {
      const std::size_t i = k % ex.omega.size();
      const double x = ex.omega.alpha(i) + (0.1 + 0.8 * u(rng)) * ex.omega.length(i);
      const double room = k % 2 ? ex.omega.beta(i) - x : -(x - ex.omega.alpha(i));
      const double t = 0.9 * u(rng) * room;
      CHECK(evaluate_U_at(ex.omega, ex.b, t, f, x) == f(x + t));
    }
  }
}

TEST_CASE("boundary condition examples") {
  auto omega = make({{0, 1}, {2, 3}});
  auto e = PiecewiseExpPoly::eigenfunction(omega, 1.25, CVector::Ones(2));
  CHECK(boundary_condition_check(half_turn_root(), e, 1e-12));
  // vanishes at every endpoint
  auto v = PiecewiseExpPoly::from_atoms(omega, {{{0.0, {0.0, 1.0, -1.0}}}, {{0.0, {-6.0, 5.0, -1.0}}}});
  CHECK(boundary_condition_check(swap2(), v, 1e-12));
  CHECK(boundary_condition_check(half_turn_root(), v, 1e-12));
  auto x = PiecewiseExpPoly::from_atoms(make({{0, 1}}), {{{0.0, {0.0, 1.0}}}});
  CHECK_FALSE(boundary_condition_check(BoundaryMatrix::identity(1), x, 1e-6));
  CHECK(boundary_defect(BoundaryMatrix::identity(1), x) == doctest::Approx(1.0));
}

TEST_CASE("local translation test") {
  auto omega = make({{0, 1}, {2, 3}});
  auto good = local_translation_test(omega, half_turn_root(), 1000, 1e-9);
  CHECK(good.pass);
  CHECK(good.trials == 1000);
  CHECK(good.max_error < 1e-9);

  auto bad = local_translation_test(omega, swap2(), 200, 1e-9);
  CHECK_FALSE(bad.pass);
  REQUIRE(bad.witness);
  CHECK(std::abs(bad.witness->evolved - bad.witness->translated) > 1e-9);

  // the fixed witness x = 0.5, t = 2
  std::mt19937_64 rng(6);
  auto f = random_domain_function(omega, swap2(), rng);
  CHECK(std::abs(evaluate_U_at(omega, swap2(), 2.0, f, 0.5) - f(2.5)) > 1e-6);

  // a non-spectral set still translates locally inside one interval
  auto g = random_domain_function(omega, swap2(), rng);
  CHECK(std::abs(evaluate_U_at(omega, swap2(), 0.3, g, 0.4) - g(0.7)) < 1e-14);
}

TEST_CASE("reflection duality") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> tdist(-2.5, 2.5);
  for (const auto& ex : examples()) {
    auto f = random_domain_function(ex.omega, ex.b, rng);
    CHECK(reflection_consistency(ex.omega, ex.b, 0.0, f, 1e-14).pass);
    const double t = tdist(rng);
    auto rep = reflection_consistency(ex.omega, ex.b, t, f, 1e-10);
    CHECK(rep.pass);
    // independent side: pointwise path sums on the mirrored problem
    const auto mirror = reflect(ex.omega);
    const auto bm = reflected_matrix(ex.b);
    const auto jf = f.reflected();
    auto rhs = apply_U_paths(ex.omega, ex.b, -t, f).function;
    for (double x : probe_points(rhs, 6)) CHECK(std::abs(evaluate_U_at(mirror, bm, t, jf, -x) - rhs(x)) < 1e-10);
  }
  auto bump = unit_bump();
  CHECK(reflection_consistency(bump.domain(), BoundaryMatrix::identity(1), 0.3, bump, 1e-12).pass);
}

TEST_CASE("evolution guard") {
  auto omega = make({{0, 1}, {2, 3}});
  std::mt19937_64 rng(8);
  auto f = random_domain_function(omega, half_turn_root(), rng);
  try {
    apply_U_paths(omega, half_turn_root(), 5000.0, f, 100);
    FAIL("expected GuardExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GuardExceeded);
  }
  auto r = apply_U_paths(omega, half_turn_root(), 20.0, f);
  CHECK(r.predicted_paths == doctest::Approx(std::pow(2.0, 21.0)));
  CHECK(r.event_count < 100);
}
