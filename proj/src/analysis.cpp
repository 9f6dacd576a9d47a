#include "spi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spi/error.hpp"
#include "spi/paths.hpp"

namespace spi {

namespace {

double sinc(double y) { return std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y; }

// distance from v to the nearest integer
double integer_distance(double v) { return std::abs(v - std::round(v)); }

bool in_lattice(double v, double a, double tol) { return integer_distance(v / a) * a <= tol; }

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}

struct LatticeMatch {
  bool ok = false;
  double error = 0.0;
  std::size_t count = 0;
};

// Compares the spectrum with (Z - theta0) / L on the window, ignoring points
// that sit on the window boundary.
LatticeMatch match_lattice(const SpectrumReport& spectrum, double measure, double theta0, double tol) {
  const Window w = spectrum.window;
  const double edge = 1e-7 * std::max({1.0, std::abs(w.lo), std::abs(w.hi)});
  LatticeMatch out;
  out.ok = true;
  std::size_t computed = 0;
  for (const auto& p : spectrum.points) {
    if (p.lambda < w.lo + edge || p.lambda > w.hi - edge) continue;
    ++computed;
    const double k = std::round(p.lambda * measure + theta0);
    out.error = std::max(out.error, std::abs(p.lambda - (k - theta0) / measure));
    if (p.dimension() != 1) out.ok = false;
  }
  std::size_t expected = 0;
  const auto k_lo = static_cast<long long>(std::ceil(w.lo * measure + theta0));
  const auto k_hi = static_cast<long long>(std::floor(w.hi * measure + theta0));
  for (long long k = k_lo; k <= k_hi; ++k) {
    const double lambda = (static_cast<double>(k) - theta0) / measure;
    if (lambda >= w.lo + edge && lambda <= w.hi - edge) ++expected;
  }
  out.count = computed;
  out.ok = out.ok && computed == expected && out.error <= tol;
  return out;
}

SpectralCheck require_spectral(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                               const SpectrumOptions& options) {
  auto check = spectral_matrix_check(omega, b, window, options);
  if (!check.spectral()) {
    std::ostringstream os;
    os << "boundary matrix is not spectral (" << to_string(check.verdict) << ")";
    if (check.witness_lambda) os << ", witness lambda = " << *check.witness_lambda;
    if (!check.reason.empty()) os << ": " << check.reason;
    throw Error(ErrorCode::NotSpectral, os.str());
  }
  return check;
}

void run_lattice_checks(const IntervalUnion& omega, const MatrixStructure& s,
                        const SpectrumReport& spectrum, double tol, LatticeSuiteReport& out) {
  const double measure = omega.measure();
  const double geom_tol = std::max(tol, omega.tolerance());
  const std::size_t n = omega.size();
  out.kind = s.kind;
  out.sigma = s.sigma;
  out.full_cycle = s.full_cycle;
  out.measure = measure;
  if (!out.full_cycle) out.failures.push_back("sigma is not a single cycle of length n");

  out.differences_in_lattice = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = omega.alpha(s.sigma[i]) - omega.beta(i);
    if (!in_lattice(diff, measure, geom_tol)) {
      out.differences_in_lattice = false;
      std::ostringstream os;
      os << "alpha_sigma(" << i << ") - beta_" << i << " = " << diff << " is not in " << measure << "Z";
      out.failures.push_back(os.str());
    }
  }

  const auto match = match_lattice(spectrum, measure, out.theta0, 1e-8);
  out.spectrum_ok = match.ok;
  out.spectrum_error = match.error;
  out.spectrum_count = match.count;
  if (!match.ok) out.failures.push_back("window spectrum differs from (Z - theta0) / L");

  out.tiling = tiles_by_lattice(omega, measure, geom_tol);
  if (!out.tiling.tiles) out.failures.push_back("omega does not tile by L Z");

  // move sigma(1), sigma^2(1), ... to the end of the growing interval
  out.chain_ok = out.full_cycle;
  double cursor = omega.beta(0);
  std::size_t j = s.sigma[0];
  for (std::size_t k = 1; k < n && j != 0; ++k, j = s.sigma[j]) {
    ChainStep step;
    step.source = j;
    step.shift = cursor - omega.alpha(j);
    step.shift_in_lattice = in_lattice(step.shift, measure, geom_tol);
    step.image = {omega.alpha(j) + step.shift, omega.beta(j) + step.shift};
    out.chain_ok = out.chain_ok && step.shift_in_lattice;
    cursor = step.image.hi;
    out.chain.push_back(step);
  }
  out.chain_union = {omega.alpha(0), cursor};
  out.chain_ok = out.chain_ok && std::abs(cursor - (omega.alpha(0) + measure)) <= geom_tol;
  if (!out.chain_ok) out.failures.push_back("translation chain does not end in (alpha_1, alpha_1 + L)");
}

}  // namespace

cplx exp_integral(const IntervalUnion& omega, double s) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double l = omega.length(i);
    acc += turn(s * (omega.alpha(i) + 0.5 * l)) * l * sinc(kTwoPi * 0.5 * s * l);
  }
  return acc;
}

CMatrix exp_gram(const IntervalUnion& omega, std::span<const double> lambdas) {
  const auto m = static_cast<Eigen::Index>(lambdas.size());
  CMatrix g(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    g(k, k) = omega.measure();
    for (Eigen::Index l = k + 1; l < m; ++l) {
      g(k, l) = exp_integral(omega, lambdas[static_cast<std::size_t>(k)] - lambdas[static_cast<std::size_t>(l)]);
      g(l, k) = std::conj(g(k, l));
    }
  }
  return g;
}

std::vector<PiecewiseExpPoly> default_probes(const IntervalUnion& omega) {
  std::vector<std::vector<ExpAtom>> ramp(omega.size()), wave(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    ramp[i].push_back({0.0, {cplx{0.0, 0.0}, cplx{1.0, 0.0}}});
    wave[i].push_back({0.37, {cplx{1.0, 0.0}}});
  }
  return {PiecewiseExpPoly::from_atoms(omega, ramp), PiecewiseExpPoly::from_atoms(omega, wave)};
}

SpectralEvidence spectral_pair_evidence(const IntervalUnion& omega, std::span<const double> lambdas, Window window,
                                        const std::vector<PiecewiseExpPoly>& probes, double tol) {
  if (!(window.hi > window.lo)) throw Error(ErrorCode::InvalidArgument, "empty window");
  std::vector<double> inside;
  for (double l : lambdas)
    if (window.contains(l)) inside.push_back(l);
  std::sort(inside.begin(), inside.end());

  SpectralEvidence ev;
  ev.window = window;
  ev.count = inside.size();
  const CMatrix g = exp_gram(omega, inside);
  for (Eigen::Index k = 0; k < g.rows(); ++k)
    for (Eigen::Index l = 0; l < g.cols(); ++l)
      if (k != l) ev.max_off_diagonal = std::max(ev.max_off_diagonal, std::abs(g(k, l)));
  ev.orthogonal = ev.max_off_diagonal < tol;

  const double expected = omega.measure() * window.width();
  ev.density_ratio = static_cast<double>(ev.count) / expected;
  ev.density_consistent = std::abs(static_cast<double>(ev.count) - expected) <= static_cast<double>(omega.size()) + 1.0;

  const CVector ones = CVector::Ones(static_cast<Eigen::Index>(omega.size()));
  for (const auto& f : probes) {
    const double total = inner_product(f, f).real();
    double captured = 0.0;
    for (double l : inside) captured += std::norm(inner_product(f, PiecewiseExpPoly::eigenfunction(omega, l, ones)));
    const double residual = total > 0.0 ? (total - captured / omega.measure()) / total : 0.0;
    ev.parseval_residuals.push_back(residual);
    ev.parseval_residual = std::max(ev.parseval_residual, residual);
  }
  return ev;
}

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "unknown";
}

const NamedCheck* StructureReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

LatticeSuiteReport multiplicative_spectral_suite(const IntervalUnion& omega, const BoundaryMatrix& b,
                                                 Window window, const SpectrumOptions& options, double tol) {
  const auto s = classify_structure(b);
  if (s.kind != StructureKind::Permutation)
    throw Error(ErrorCode::WrongStructure, "the multiplicative suite needs a permutation matrix, got " +
                                               std::string(to_string(s.kind)));
  require_spectral(omega, b, window, options);
  LatticeSuiteReport out;
  out.weights_ok = true;
  run_lattice_checks(omega, s, best_spectrum(omega, b, window, options), tol, out);
  out.pass = out.failures.empty();
  return out;
}

LatticeSuiteReport forelli_spectral_suite(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                          const SpectrumOptions& options, double tol) {
  const auto s = classify_structure(b);
  if (s.kind == StructureKind::General)
    throw Error(ErrorCode::WrongStructure, "the Forelli suite needs a weighted permutation matrix");
  require_spectral(omega, b, window, options);
  const auto spectrum = best_spectrum(omega, b, window, options);
  if (spectrum.points.empty()) throw Error(ErrorCode::InvalidArgument, "no spectrum points in the window");

  // theta0 from the offset of the spectrum, taken at the smallest |lambda|
  const double measure = omega.measure();
  auto offset = [&](double lambda) {
    const double v = -lambda * measure;
    return v - std::floor(v);
  };
  const auto anchor = std::min_element(spectrum.points.begin(), spectrum.points.end(),
                                       [](const auto& a, const auto& c) { return std::abs(a.lambda) < std::abs(c.lambda); });
  const double theta0 = offset(anchor->lambda);
  for (const auto& p : spectrum.points) {
    const double d = offset(p.lambda) - theta0;
    if (integer_distance(d) > 1e-6) {
      std::ostringstream os;
      os << "lambda = " << p.lambda << " gives offset " << offset(p.lambda) << ", expected " << theta0;
      throw Error(ErrorCode::InconsistentTheta, os.str());
    }
  }

  LatticeSuiteReport out;
  out.theta0 = theta0;
  out.weights_ok = forelli_weight_check(b, omega, theta0, tol);
  if (!out.weights_ok) out.failures.push_back("weights do not match e^{2 pi i (theta0 / L)(alpha_sigma(i) - beta_i)}");
  run_lattice_checks(omega, s, spectrum, tol, out);
  out.pass = out.failures.empty();
  return out;
}

NamedCheck gap_criterion(const IntervalUnion& omega, double tol) {
  NamedCheck check{"gap_criterion", CheckStatus::Pass, {}};
  std::vector<std::string> found;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    for (std::size_t j = 0; j < omega.size(); ++j) {
      if (i == j) continue;
      const double gap = omega.alpha(j) - omega.beta(i);
      if (gap <= tol) continue;
      std::vector<std::vector<double>> sums;
      try {
        sums = gap_decomposition(omega, gap, tol);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::GuardExceeded) throw;
        check.status = CheckStatus::Skipped;
        check.detail = e.what();
        return check;
      }
      std::ostringstream os;
      os << "alpha_" << j << " - beta_" << i << " = " << gap;
      if (sums.empty()) {
        check.status = CheckStatus::Fail;
        os << " is not a sum of interval lengths (min length " << omega.min_length() << ")";
        check.detail = os.str();
        return check;
      }
      os << " = ";
      for (std::size_t k = 0; k < sums.front().size(); ++k) os << (k ? " + " : "") << sums.front()[k];
      found.push_back(os.str());
    }
  }
  check.detail = found.empty() ? "no positive gaps" : join(found, "; ");
  return check;
}

StructureReport structure_suite(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                const SpectrumOptions& options, double tol) {
  StructureReport report;
  report.structure = classify_structure(b);
  report.spectral = spectral_matrix_check(omega, b, window, options);
  const bool spectral = report.spectral.spectral();
  const std::size_t n = omega.size();
  const double geom_tol = omega.tolerance();
  const auto& m = b.matrix();
  auto entry = [&](std::size_t i, std::size_t j) {
    return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  std::string not_spectral_reason = "needs a spectral boundary matrix; check gave " +
                                    std::string(to_string(report.spectral.verdict));
  if (report.spectral.witness_lambda) {
    std::ostringstream os;
    os << " (witness lambda = " << *report.spectral.witness_lambda << ")";
    not_spectral_reason += os.str();
  }
  auto skipped = [](std::string name, std::string reason) {
    return NamedCheck{std::move(name), CheckStatus::Skipped, std::move(reason)};
  };

  report.checks.push_back(gap_criterion(omega, geom_tol));
  report.checks.push_back(spectral ? NamedCheck{"spectral_matrix", CheckStatus::Pass, std::string(to_string(report.spectral.verdict))}
                                   : NamedCheck{"spectral_matrix", CheckStatus::Fail, not_spectral_reason});

  // shared endpoints force b_{i,i+1} = 1
  {
    std::vector<std::size_t> shared;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (std::abs(omega.alpha(i + 1) - omega.beta(i)) <= geom_tol) shared.push_back(i);
    if (shared.empty()) {
      report.checks.push_back(skipped("adjacency", "no shared endpoints"));
    } else if (!spectral) {
      report.checks.push_back(skipped("adjacency", not_spectral_reason));
    } else {
      NamedCheck c{"adjacency", CheckStatus::Pass, {}};
      std::vector<std::string> notes;
      for (std::size_t i : shared) {
        bool ok = std::abs(entry(i, i + 1) - 1.0) <= tol;
        for (std::size_t k = 0; k < n; ++k) {
          if (k != i + 1 && std::abs(entry(i, k)) > tol) ok = false;
          if (k != i && std::abs(entry(k, i + 1)) > tol) ok = false;
        }
        std::ostringstream os;
        os << "b_{" << i << "," << i + 1 << "} = " << entry(i, i + 1).real() << (ok ? " with zero row and column" : " violates the forced pattern");
        notes.push_back(os.str());
        if (!ok) c.status = CheckStatus::Fail;
      }
      c.detail = join(notes, "; ");
      report.checks.push_back(std::move(c));
    }
  }

  // consecutive gap equal to the minimal length
  {
    const double lmin = omega.min_length();
    std::vector<std::size_t> minimal;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (std::abs(omega.alpha(i + 1) - omega.beta(i) - lmin) <= geom_tol) minimal.push_back(i);
    if (minimal.empty()) {
      report.checks.push_back(skipped("minimal_gap", "no gap equals the minimal length"));
    } else if (!spectral) {
      report.checks.push_back(skipped("minimal_gap", not_spectral_reason));
    } else {
      NamedCheck c{"minimal_gap", CheckStatus::Pass, {}};
      std::vector<std::string> notes;
      for (std::size_t i : minimal) {
        cplx sum{0.0, 0.0};
        bool zeros = true;
        for (std::size_t j = 0; j < n; ++j) {
          if (std::abs(omega.length(j) - lmin) <= geom_tol) {
            sum += entry(i, j) * entry(j, i + 1);
          } else if (std::abs(entry(i, j)) > tol || std::abs(entry(j, i + 1)) > tol) {
            zeros = false;
          }
        }
        const bool ok = std::abs(sum - 1.0) <= tol && zeros;
        std::ostringstream os;
        os << "gap after interval " << i << ": sum b_{i,j} b_{j,i+1} = (" << sum.real() << ", " << sum.imag() << ")"
           << (zeros ? "" : ", nonzero entry for a longer interval");
        notes.push_back(os.str());
        if (!ok) c.status = CheckStatus::Fail;
      }
      c.detail = join(notes, "; ");
      report.checks.push_back(std::move(c));
    }
  }

  // |b_kk| != 1
  if (n < 2) {
    report.checks.push_back(skipped("diagonal", "single interval"));
  } else if (!spectral) {
    report.checks.push_back(skipped("diagonal", not_spectral_reason));
  } else {
    NamedCheck c{"diagonal", CheckStatus::Pass, {}};
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      worst = std::max(worst, std::abs(entry(k, k)));
      if (std::abs(std::abs(entry(k, k)) - 1.0) <= tol) {
        c.status = CheckStatus::Fail;
        c.detail = "|b_{" + std::to_string(k) + "," + std::to_string(k) + "}| = 1";
      }
    }
    if (c.status == CheckStatus::Pass) {
      std::ostringstream os;
      os << "max |b_kk| = " << worst;
      c.detail = os.str();
    }
    report.checks.push_back(std::move(c));
  }

  std::vector<std::pair<std::size_t, std::size_t>> unimodular;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(std::abs(entry(i, j)) - 1.0) <= tol) unimodular.emplace_back(i, j);

  std::optional<SpectrumReport> spectrum;
  if (spectral && !unimodular.empty()) spectrum = best_spectrum(omega, b, window, options);

  // unimodular entries confine the spectrum to a shifted lattice
  if (unimodular.empty()) {
    report.checks.push_back(skipped("unimodular_entry", "no unimodular entry"));
  } else if (!spectral) {
    report.checks.push_back(skipped("unimodular_entry", not_spectral_reason));
  } else {
    NamedCheck c{"unimodular_entry", CheckStatus::Pass, {}};
    std::vector<std::string> notes;
    for (auto [i, j] : unimodular) {
      const double a = omega.alpha(j) - omega.beta(i);
      const double theta0 = std::arg(entry(i, j)) / kTwoPi;
      double worst = 0.0;
      for (const auto& p : spectrum->points) worst = std::max(worst, integer_distance(p.lambda * a + theta0));
      const bool disjoint = std::abs(a) <= geom_tol || translates_disjoint(omega, a);
      std::ostringstream os;
      os << "b_{" << i << "," << j << "}: a = " << a << ", max dist(lambda a + theta0, Z) = " << worst
         << (disjoint ? ", translates disjoint" : ", translates overlap");
      notes.push_back(os.str());
      if (worst > tol || !disjoint) c.status = CheckStatus::Fail;
    }
    c.detail = join(notes, "; ");
    report.checks.push_back(std::move(c));
  }

  // moving a whole interval by alpha_j - beta_i keeps the spectrum
  if (!spectral) {
    report.checks.push_back(skipped("interval_move", not_spectral_reason));
  } else {
    std::optional<NamedCheck> move;
    for (auto [i, j] : unimodular) {
      if (i == j) continue;
      IntervalUnion moved = omega;
      try {
        moved = move_interval(omega, j, i);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MoveCollision) throw;
        continue;
      }
      NamedCheck c{"interval_move", CheckStatus::Pass, {}};
      std::ostringstream os;
      os << "interval " << j << " moved after interval " << i;
      const auto lambdas = spectrum->lambdas();
      const CMatrix g = exp_gram(moved, lambdas);
      double off = 0.0;
      for (Eigen::Index k = 0; k < g.rows(); ++k)
        for (Eigen::Index l = 0; l < g.cols(); ++l)
          if (k != l) off = std::max(off, std::abs(g(k, l)));
      os << ", max Gram off-diagonal " << off;
      if (off > std::max(tol, 1e-8)) c.status = CheckStatus::Fail;
      try {
        const auto fitted = matrix_from_spectrum(moved, lambdas, std::max(tol, 1e-8));
        const auto again = best_spectrum(moved, fitted, window, options).lambdas();
        const double edge = 1e-7 * std::max({1.0, std::abs(window.lo), std::abs(window.hi)});
        auto interior = [&](std::vector<double> v) {
          std::erase_if(v, [&](double x) { return x < window.lo + edge || x > window.hi - edge; });
          return v;
        };
        const auto lhs = interior(lambdas);
        const auto rhs = interior(again);
        double err = lhs.size() == rhs.size() ? 0.0 : 1.0;
        for (std::size_t k = 0; k < lhs.size() && k < rhs.size(); ++k) err = std::max(err, std::abs(lhs[k] - rhs[k]));
        os << ", round-trip spectrum error " << err;
        if (err > 1e-8) c.status = CheckStatus::Fail;
      } catch (const Error& e) {
        c.status = CheckStatus::Fail;
        os << ", " << e.what();
      }
      c.detail = os.str();
      move = std::move(c);
      break;
    }
    report.checks.push_back(move ? std::move(*move)
                                 : skipped("interval_move", unimodular.empty() ? "no unimodular off-diagonal entry"
                                                                               : "every move collides"));
  }

  if (spectral && report.structure.kind != StructureKind::General) {
    const bool mult = report.structure.kind == StructureKind::Permutation;
    report.lattice = mult ? multiplicative_spectral_suite(omega, b, window, options, tol)
                          : forelli_spectral_suite(omega, b, window, options, tol);
    report.checks.push_back({mult ? "multiplicative_suite" : "forelli_suite",
                             report.lattice->pass ? CheckStatus::Pass : CheckStatus::Fail,
                             report.lattice->pass ? "all lattice statements hold" : join(report.lattice->failures, "; ")});
  }
  return report;
}

PowerSuiteReport equal_length_power_suite(const IntervalUnion& omega, const BoundaryMatrix& b, double t0,
                                          PowerCondition condition, double tol) {
  if (!omega.equal_lengths(omega.tolerance()))
    throw Error(ErrorCode::NotEqualLength, "the power suite needs intervals of equal length");
  if (!(t0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "t0 must be positive");
  const double ell = omega.length(0);
  PowerSuiteReport out;
  out.condition = condition;
  out.p = static_cast<unsigned>(std::max(1.0, std::ceil(t0 / ell - 1e-12)));
  out.structure = classify_structure(power(b, out.p), tol);
  out.necessary_condition = condition == PowerCondition::Multiplicative ? out.structure.kind == StructureKind::Permutation
                                                                        : out.structure.kind != StructureKind::General;
  const double d = 0.5 * (t0 - (out.p - 1) * ell);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const auto agg = aggregate_equal_length(omega, b, omega.beta(i) - d, t0, out.p);
    out.aggregation_error = std::max(out.aggregation_error, agg.max_difference);
  }
  return out;
}

}  // namespace spi
