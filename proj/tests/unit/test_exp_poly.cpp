#include <doctest.h>

#include <random>

#include "spi/error.hpp"
#include "spi/exp_poly.hpp"
#include "test_support.hpp"

using namespace spi;
using namespace spi::test;

namespace {

ExpAtom random_atom(std::mt19937_64& rng, double max_freq, std::size_t max_deg) {
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> f(-max_freq, max_freq);
  ExpAtom a;
  a.frequency = f(rng);
  a.poly.resize(std::uniform_int_distribution<std::size_t>(0, max_deg)(rng) + 1);
  for (auto& c : a.poly) c = {g(rng), g(rng)};
  return a;
}

PiecewiseExpPoly random_function(const IntervalUnion& omega, std::mt19937_64& rng, double max_freq = 6.0,
                                 std::size_t max_deg = 3) {
  std::vector<std::vector<ExpAtom>> atoms(omega.size());
  for (auto& v : atoms)
    for (int k = 0; k < 2; ++k) v.push_back(random_atom(rng, max_freq, max_deg));
  return PiecewiseExpPoly::from_atoms(omega, atoms);
}

cplx quadrature_inner(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
  cplx s = 0.0;
  const auto& omega = f.domain();
  for (std::size_t i = 0; i < omega.size(); ++i)
    s += simpson([&](double x) { return f.value_in(i, x) * std::conj(g.value_in(i, x)); }, omega.alpha(i),
                 omega.beta(i), 6000);
  return s;
}

}  // namespace

TEST_CASE("atom evaluation and shifts") {
  ExpAtom a{0.25, {1.0, 2.0, cplx(0, 1)}};
  const double x = 0.7;
  const cplx p = 1.0 + 2.0 * x + I * x * x;
  CHECK(std::abs(a(x) - p * turn(0.25 * x)) < 1e-15);
  CHECK(a.degree() == 2);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    auto atom = random_atom(rng, 5, 6);
    const double s = u(rng), y = u(rng);
    CHECK(std::abs(shifted(atom, s)(y) - atom(y + s)) < 1e-10 * (1 + std::abs(atom(y + s))));
  }
  std::vector<cplx> q{1.0, 1.0};
  auto r = shift_polynomial(q, 2.0);
  CHECK(r[0] == cplx(3.0));
  CHECK(r[1] == cplx(1.0));
}

TEST_CASE("combine atoms") {
  auto out = combine_atoms({{1.0, {1.0}}, {1.0, {-1.0}}, {2.0, {0.0, 1.0}}, {2.0, {1.0}}});
  REQUIRE(out.size() == 1);
  CHECK(out[0].frequency == 2.0);
  CHECK(out[0].poly[0] == cplx(1.0));
  CHECK(out[0].poly[1] == cplx(1.0));
}

TEST_CASE("construction and validation") {
  auto omega = make({{0, 1}, {2, 3}});
  CHECK_THROWS_AS(PiecewiseExpPoly::from_atoms(omega, {{}}), Error);
  std::vector<cplx> big(12, 1.0);
  CHECK_THROWS_AS(PiecewiseExpPoly::from_atoms(omega, {{{0.0, big}}, {}}), Error);
  CHECK_NOTHROW(PiecewiseExpPoly::from_atoms(omega, {{{0.0, big}}, {}}, 16));
  // pieces must cover the interval
  CHECK_THROWS_AS(PiecewiseExpPoly::from_pieces(omega, {{{0.0, 0.5, {}}}, {{2.0, 3.0, {}}}}), Error);
  auto ok = PiecewiseExpPoly::from_pieces(
      omega, {{{0.0, 0.5, {{0.0, {1.0}}}}, {0.5, 1.0, {{0.0, {2.0}}}}}, {{2.0, 3.0, {}}}});
  CHECK(ok.piece_count() == 3);
  CHECK(ok(0.25) == cplx(1.0));
  CHECK(ok(0.75) == cplx(2.0));
  CHECK(ok(0.5) == cplx(2.0));  // right-hand piece at an interior breakpoint
  CHECK(ok(1.5) == cplx(0.0));
  CHECK(ok.alpha_values()(0) == cplx(1.0));
  CHECK(ok.beta_values()(0) == cplx(2.0));
  CHECK(ok.breakpoints(0) == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("closed form inner products") {
  auto omega = make({{0, 1}, {2, 3}});
  CVector one = CVector::Ones(2);
  auto e0 = PiecewiseExpPoly::eigenfunction(omega, 0.0, one);
  auto e14 = PiecewiseExpPoly::eigenfunction(omega, 0.25, one);
  CHECK(std::abs(inner_product(e0, e0) - 2.0) < 1e-15);
  CHECK(std::abs(inner_product(e14, e0)) < 1e-15);
  auto e12 = PiecewiseExpPoly::eigenfunction(omega, 0.5, one);
  CHECK(std::abs(inner_product(e12, e0)) > 0.1);
}

TEST_CASE("inner products agree with quadrature") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    auto omega = random_union(1 + trial % 3, rng);
    auto f = random_function(omega, rng);
    auto g = random_function(omega, rng);
    const cplx exact = inner_product(f, g);
    const cplx quad = quadrature_inner(f, g);
    CHECK(std::abs(exact - quad) < 1e-8 * (1.0 + std::abs(quad)));
    CHECK(std::abs(inner_product(g, f) - std::conj(exact)) < 1e-12 * (1.0 + std::abs(exact)));
    CHECK(std::abs(norm(f) * norm(f) - inner_product(f, f).real()) < 1e-10 * (1.0 + norm(f) * norm(f)));
  }
}

TEST_CASE("exponential moments") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = u(rng), b = a + std::abs(u(rng)) + 0.1;
    // small and large frequencies both exercise the recurrences
    const double s = trial % 3 == 0 ? 1e-9 * u(rng) : 3.0 * u(rng);
    auto m = exp_moments(a, b, s, 6);
    for (std::size_t k = 0; k <= 6; ++k) {
      const cplx quad = simpson([&](double x) { return std::pow(x, static_cast<double>(k)) * turn(s * x); }, a, b, 64000);
      CHECK(std::abs(m[k] - quad) < 1e-9 * (1.0 + std::abs(quad)));
    }
  }
}

TEST_CASE("sum, scaling and refinement") {
  std::mt19937_64 rng(4);
  auto omega = make({{0, 1}, {2, 3.5}});
  auto f = random_function(omega, rng);
  auto g = PiecewiseExpPoly::from_pieces(
      omega, {{{0.0, 0.3, {{1.0, {1.0}}}}, {0.3, 1.0, {{-1.0, {0.0, 1.0}}}}}, {{2.0, 3.5, {{0.5, {I}}}}}});
  auto h = f + g.scaled(cplx(2, -1));
  for (double x : probe_points(f, g)) CHECK(std::abs(h(x) - (f(x) + cplx(2, -1) * g(x))) < 1e-12);
  CHECK(h.breakpoints(0) == std::vector<double>{0.0, 0.3, 1.0});
  CHECK(max_abs_difference(h, h) == 0.0);
}

TEST_CASE("reflection") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    auto omega = random_union(1 + trial % 3, rng);
    auto f = random_function(omega, rng);
    auto jf = f.reflected();
    CHECK(jf.domain() == reflect(omega));
    for (double x : probe_points(f)) CHECK(std::abs(jf(-x) - f(x)) < 1e-10 * (1 + std::abs(f(x))));
    CHECK(std::abs(norm(jf) - norm(f)) < 1e-10 * (1 + norm(f)));
  }
}

TEST_CASE("probe points avoid breakpoints") {
  auto omega = make({{0, 1}});
  auto f = PiecewiseExpPoly::from_pieces(omega, {{{0.0, 0.5, {}}, {0.5, 1.0, {}}}});
  auto pts = probe_points(f, 4);
  REQUIRE(pts.size() == 8);
  CHECK(pts[0] == doctest::Approx(0.0625));
  for (double x : pts) CHECK(x != 0.5);
}
