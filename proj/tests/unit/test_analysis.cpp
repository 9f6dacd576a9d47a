#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "spi/analysis.hpp"
#include "spi/error.hpp"
#include "test_support.hpp"

using namespace spi;
using namespace spi::test;

namespace {

const SpectrumOptions kOpts{};

// Principal square root through an eigendecomposition (test side only).
BoundaryMatrix unitary_sqrt(const CMatrix& m) {
  Eigen::ComplexEigenSolver<CMatrix> es(m);
  CVector d = es.eigenvalues();
  for (auto& z : d) z = std::polar(1.0, 0.5 * std::arg(z));
  const CMatrix& v = es.eigenvectors();
  return BoundaryMatrix::create(v * d.asDiagonal() * v.inverse(), 1e-9);
}

std::vector<double> lattice(double offset, double step, Window w) {
  std::vector<double> out;
  for (double k = std::ceil((w.lo - offset) / step); offset + k * step <= w.hi; k += 1.0) out.push_back(offset + k * step);
  return out;
}

}  // namespace

TEST_CASE("exponential integrals match quadrature") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> s(-6, 6);
  for (int trial = 0; trial < 80; ++trial) {
    auto omega = random_union(1 + trial % 4, rng);
    const double freq = trial % 10 == 0 ? 0.0 : s(rng);
    cplx quad = 0.0;
    for (const auto& iv : omega.intervals()) quad += simpson([&](double x) { return turn(freq * x); }, iv.lo, iv.hi, 6000);
    CHECK(std::abs(exp_integral(omega, freq) - quad) < 1e-10);
  }
  CHECK(exp_integral(make({{0, 1}, {2, 3}}), 0.0) == cplx(2.0));
}

TEST_CASE("Gram matrices") {
  auto omega = make({{0, 1}, {2, 3}});
  std::vector<double> good{0.0, 0.25, 1.0};
  CMatrix g = exp_gram(omega, good);
  for (Eigen::Index k = 0; k < 3; ++k) {
    CHECK(g(k, k) == cplx(2.0));
    for (Eigen::Index l = 0; l < 3; ++l)
      if (k != l) CHECK(std::abs(g(k, l)) < 1e-12);
  }
  std::vector<double> bad{0.0, 0.5};
  CMatrix h = exp_gram(omega, bad);
  // (e^{pi i} - 1)(1 + e^{2 pi i}) / (pi i) = -4 / (pi i)
  CHECK(std::abs(h(1, 0) - cplx(-4.0) / (kTwoPi / 2.0 * I)) < 1e-12);
  std::vector<double> one{0.3};
  CMatrix s = exp_gram(make({{0, 0.5}, {1, 2}}), one);
  CHECK(s.rows() == 1);
  CHECK(s(0, 0) == cplx(1.5));
}

TEST_CASE("spectral pair evidence") {
  auto omega = make({{0, 1}, {2, 3}});
  const Window w{-20, 20};
  auto probes = default_probes(omega);
  auto lam = lattice(0.0, 1.0, w);
  auto shifted = lattice(0.25, 1.0, w);
  lam.insert(lam.end(), shifted.begin(), shifted.end());
  auto ev = spectral_pair_evidence(omega, lam, w, probes, 1e-9);
  CHECK(ev.orthogonal);
  CHECK(ev.density_consistent);
  CHECK(ev.density_ratio == doctest::Approx(1.0).epsilon(0.05));
  CHECK(ev.parseval_residual >= 0.0);
  CHECK(ev.parseval_residual < 0.05);
  auto narrow_lam = lattice(0.0, 1.0, {-5, 5});
  auto s2 = lattice(0.25, 1.0, {-5, 5});
  narrow_lam.insert(narrow_lam.end(), s2.begin(), s2.end());
  auto narrow = spectral_pair_evidence(omega, narrow_lam, {-5, 5}, probes, 1e-9);
  CHECK(narrow.parseval_residual > ev.parseval_residual);

  auto halves = spectral_pair_evidence(omega, lattice(0.0, 0.5, w), w, probes, 1e-9);
  CHECK_FALSE(halves.orthogonal);

  auto unit = make({{0, 1}});
  auto fourier = spectral_pair_evidence(unit, lattice(0.0, 1.0, {-200, 200}), {-200, 200}, default_probes(unit), 1e-9);
  CHECK(fourier.orthogonal);
  CHECK(fourier.parseval_residual < 2e-3);
  CHECK(fourier.parseval_residual >= 0.0);
}

TEST_CASE("gap criterion") {
  CHECK(gap_criterion(make({{0, 1}, {2, 3}}), 1e-9).status == CheckStatus::Pass);
  auto bad = gap_criterion(make({{0, 1}, {1.5, 2.5}}), 1e-9);
  CHECK(bad.status == CheckStatus::Fail);
  CHECK(bad.detail.find("0.5") != std::string::npos);
  CHECK(gap_criterion(make({{0, 1}, {1, 2}}), 1e-9).status == CheckStatus::Pass);
  // the second gap 1.5 is not a sum of unit lengths
  CHECK(gap_criterion(make({{0, 1}, {2, 3}, {4.5, 5.5}}), 1e-9).status == CheckStatus::Fail);
}

TEST_CASE("structure suite on the spectral pair") {
  auto rep = structure_suite(make({{0, 1}, {2, 3}}), half_turn_root(), {-3, 3}, kOpts, 1e-8);
  CHECK(rep.spectral.spectral());
  CHECK(rep.structure.kind == StructureKind::General);
  CHECK(rep.find("gap_criterion")->status == CheckStatus::Pass);
  CHECK(rep.find("diagonal")->status == CheckStatus::Pass);
  CHECK(rep.find("unimodular_entry")->status == CheckStatus::Skipped);
  CHECK(rep.find("minimal_gap")->status == CheckStatus::Pass);
  CHECK_FALSE(rep.lattice);
  CHECK(rep.find("no_such_check") == nullptr);
}

TEST_CASE("structure suite on adjacent intervals") {
  auto rep = structure_suite(make({{0, 1}, {1, 2}}), swap2(), {-3, 3}, kOpts, 1e-8);
  CHECK(rep.find("adjacency")->status == CheckStatus::Pass);
  CHECK(rep.find("interval_move")->status == CheckStatus::Pass);
  CHECK(rep.find("multiplicative_suite")->status == CheckStatus::Pass);
  REQUIRE(rep.lattice);
  CHECK(rep.lattice->chain_ok);
  for (const auto& c : rep.checks) CHECK(c.status != CheckStatus::Fail);
}

TEST_CASE("structure suite skips when not spectral") {
  auto rep = structure_suite(make({{0, 1}, {1.5, 2.5}}), half_turn_root(), {-3, 3}, kOpts, 1e-8);
  CHECK(rep.find("gap_criterion")->status == CheckStatus::Fail);
  CHECK_FALSE(rep.spectral.spectral());
  auto sw = structure_suite(make({{0, 1}, {2, 3}}), swap2(), {-3, 3}, kOpts, 1e-8);
  CHECK(sw.find("spectral_matrix")->status == CheckStatus::Fail);
  CHECK(sw.find("interval_move")->status == CheckStatus::Skipped);
  CHECK_FALSE(sw.lattice);
}

TEST_CASE("multiplicative suite") {
  auto adj = multiplicative_spectral_suite(make({{0, 1}, {1, 2}}), swap2(), {-3, 3}, kOpts, 1e-8);
  CHECK(adj.pass);
  CHECK(adj.full_cycle);
  CHECK(adj.tiling.tiles);
  CHECK(adj.spectrum_ok);
  REQUIRE(adj.chain.size() == 1);
  CHECK(adj.chain[0].shift == 0.0);
  CHECK(adj.chain_union == Interval{0, 2});

  auto far = multiplicative_spectral_suite(make({{0, 1}, {3, 4}}), swap2(), {-3, 3}, kOpts, 1e-8);
  CHECK(far.pass);
  REQUIRE(far.chain.size() == 1);
  CHECK(far.chain[0].shift == -2.0);
  CHECK(far.chain[0].shift_in_lattice);

  try {
    multiplicative_spectral_suite(make({{0, 1}, {2, 3}}), swap2(), {-3, 3}, kOpts, 1e-8);
    FAIL("expected NotSpectral");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSpectral);
  }
  try {
    multiplicative_spectral_suite(make({{0, 1}, {3, 4}}), weighted_swap(), {-3, 3}, kOpts, 1e-8);
    FAIL("expected WrongStructure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongStructure);
  }

  // a three-cycle on unequal lengths
  CMatrix p(3, 3);
  p << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  auto omega = make({{0, 1}, {1, 1.5}, {1.5, 3}});
  auto three = multiplicative_spectral_suite(omega, BoundaryMatrix::create(p), {-3, 3}, kOpts, 1e-8);
  CHECK(three.pass);
  double total = 0.0;
  for (const auto& step : three.chain) CHECK(step.shift_in_lattice);
  for (const auto& iv : omega.intervals()) total += iv.length();
  CHECK(three.chain_union.length() == doctest::Approx(total));
}

TEST_CASE("Forelli suite") {
  auto rep = forelli_spectral_suite(make({{0, 1}, {3, 4}}), weighted_swap(), {-3, 3}, kOpts, 1e-8);
  CHECK(rep.pass);
  CHECK(rep.kind == StructureKind::WeightedPermutation);
  CHECK(std::abs(rep.theta0 - 0.25) < 1e-8);
  CHECK(rep.weights_ok);
  CHECK(rep.differences_in_lattice);
  CHECK(rep.tiling.tiles);
  CHECK(rep.spectrum_error < 1e-8);

  auto plain = forelli_spectral_suite(make({{0, 1}, {3, 4}}), swap2(), {-3, 3}, kOpts, 1e-8);
  CHECK(plain.pass);
  CHECK(std::abs(plain.theta0) < 1e-12);

  CHECK_THROWS_AS(forelli_spectral_suite(make({{0, 1}, {2, 3}}), weighted_swap(), {-3, 3}, kOpts, 1e-8), Error);
  try {
    forelli_spectral_suite(make({{0, 1}, {2, 3}}), half_turn_root(), {-3, 3}, kOpts, 1e-8);
    FAIL("expected WrongStructure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongStructure);
  }
  // weighted swap on (0,1) u (2,3): gap 1 is not in 2Z
  CHECK_FALSE(forelli_weight_check(weighted_swap(), make({{0, 1}, {2, 3}}), 0.25, 1e-10));
}

TEST_CASE("power suite") {
  auto omega = make({{0, 1}, {2, 3}});
  auto sq = equal_length_power_suite(omega, half_turn_root(), 1.5, PowerCondition::Multiplicative, 1e-8);
  CHECK(sq.p == 2);
  CHECK(sq.structure.kind == StructureKind::Permutation);
  CHECK(sq.necessary_condition);
  CHECK(sq.aggregation_error < 1e-12);

  auto one = equal_length_power_suite(omega, half_turn_root(), 0.5, PowerCondition::Multiplicative, 1e-8);
  CHECK(one.p == 1);
  CHECK(one.structure.kind == StructureKind::General);
  CHECK_FALSE(one.necessary_condition);

  for (unsigned p = 1; p <= 4; ++p) {
    auto perm = equal_length_power_suite(omega, swap2(), p - 0.5, PowerCondition::Multiplicative, 1e-8);
    CHECK(perm.p == p);
    CHECK(perm.structure.kind == StructureKind::Permutation);
    auto w = equal_length_power_suite(omega, weighted_swap(), p, PowerCondition::Forelli, 1e-8);
    CHECK(w.p == p);
    CHECK(w.necessary_condition);
  }

  CMatrix cyc(3, 3);
  cyc << 0, 1, 0, 0, 0, 1, 1, 0, 0;
  auto root = unitary_sqrt(cyc);
  auto three = equal_length_power_suite(make({{0, 1}, {2, 3}, {4, 5}}), root, 2.0, PowerCondition::Multiplicative, 1e-8);
  CHECK(three.p == 2);
  CHECK(three.structure.kind == StructureKind::Permutation);
  CHECK(three.aggregation_error < 1e-12);

  CHECK_THROWS_AS(equal_length_power_suite(make({{0, 1}, {2, 3.5}}), swap2(), 1.0, PowerCondition::Multiplicative, 1e-8),
                  Error);
}

TEST_CASE("general matrices never claim multiplicativity") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + trial % 3;
    auto b = random_unitary(n, rng);
    auto omega = random_union(n, rng);
    auto s = classify_structure(b);
    CHECK(s.kind == StructureKind::General);
    CHECK_FALSE(s.multiplicative_group());
    CHECK_FALSE(s.forelli_group());
    CHECK_THROWS_AS(multiplicative_spectral_suite(omega, b, {-2, 2}, kOpts, 1e-8), Error);
    auto rep = structure_suite(omega, b, {-2, 2}, kOpts, 1e-8);
    CHECK_FALSE(rep.lattice);
    CHECK(rep.find("multiplicative_suite") == nullptr);
  }
}
