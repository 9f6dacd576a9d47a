#include "spi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "spi/error.hpp"

namespace spi {

namespace {

constexpr double kConstantTol = 1e-6;

// Sum of the principal eigenphases (in [0, 2 pi)) of W(lambda) = E(-lambda l) B.
// W is unitarily similar to M(lambda) via E(lambda alpha), so both share their
// eigenvalues. Every eigenphase of W decreases in lambda and the speeds add up
// to 2 pi L, hence (P(b) - P(a)) / 2 pi + L (b - a) is the number of times an
// eigenphase crosses zero in (a, b].
class PhaseWinding {
 public:
  PhaseWinding(const IntervalUnion& omega, const BoundaryMatrix& b)
      : lengths_(omega.lengths()), b_(b.matrix()), measure_(omega.measure()) {}

  double phase_sum(double lambda) const {
    const CMatrix w = exp_diag(lengths_, -lambda) * b_;
    Eigen::ComplexEigenSolver<CMatrix> solver(w, false);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorCode::ConvergenceFailure, "eigenvalue iteration failed at lambda = " + std::to_string(lambda));
    double sum = 0.0;
    for (const cplx& mu : solver.eigenvalues()) {
      double phi = std::arg(mu);
      if (phi < 0.0) phi += kTwoPi;
      sum += phi;
    }
    return sum;
  }

  // Crossings in (a, b]; throws when the winding is far from an integer.
  int crossings(double a, double pa, double b, double pb) const {
    const double raw = (pb - pa) / kTwoPi + measure_ * (b - a);
    const double count = std::round(raw);
    if (std::abs(raw - count) > 0.25 || count < 0.0) {
      std::ostringstream os;
      os << "eigenphase winding " << raw << " on (" << a << ", " << b << "] is not a count";
      throw Error(ErrorCode::ConvergenceFailure, os.str());
    }
    return static_cast<int>(count);
  }

 private:
  std::vector<double> lengths_;
  CMatrix b_;
  double measure_;
};

struct RawRoot {
  double lambda;
  int multiplicity;
};

void isolate(const PhaseWinding& winding, double a, double pa, double b, double pb, int count,
             double width_tol, std::vector<RawRoot>& out) {
  const double m = 0.5 * (a + b);
  if (b - a <= width_tol || m <= a || m >= b) {
    out.push_back({m, count});
    return;
  }
  const double pm = winding.phase_sum(m);
  int left = winding.crossings(a, pa, m, pm);
  left = std::clamp(left, 0, count);
  if (left > 0) isolate(winding, a, pa, m, pm, left, width_tol, out);
  if (count - left > 0) isolate(winding, m, pm, b, pb, count - left, width_tol, out);
}

void normalize_phase(CVector& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const cplx p = v(k) / std::abs(v(k));
  v /= p;
}

SpectralPoint make_point(const IntervalUnion& omega, const BoundaryMatrix& b, double lambda,
                         std::vector<CVector> basis) {
  SpectralPoint pt;
  pt.lambda = lambda;
  const auto ea = exp_diag(omega.alphas(), lambda);
  const auto eb = exp_diag(omega.betas(), lambda);
  for (auto& c : basis) {
    normalize_phase(c);
    pt.eig_residual = std::max(pt.eig_residual, (b.matrix() * (ea * c) - eb * c).norm());
  }
  pt.constant = basis.size() == 1 && is_constant_vector(basis.front(), kConstantTol);
  pt.basis = std::move(basis);
  pt.root_residual = root_distance(omega, b, lambda);
  return pt;
}

struct PhaseGroup {
  double theta;
  std::vector<CVector> vectors;
};

// Eigenphases of B merged within 1e-9, with phases just below 1 folded onto 0.
std::vector<PhaseGroup> phase_groups(const BoundaryMatrix& b) {
  const auto eig = eig_unitary(b);
  std::vector<std::pair<double, Eigen::Index>> phases;
  for (std::size_t j = 0; j < eig.phases.size(); ++j) {
    double th = eig.phases[j];
    if (th > 1.0 - 1e-9) th -= 1.0;
    phases.emplace_back(th, static_cast<Eigen::Index>(j));
  }
  std::sort(phases.begin(), phases.end());
  std::vector<PhaseGroup> groups;
  for (const auto& [th, j] : phases) {
    if (groups.empty() || th - groups.back().theta > 1e-9)
      groups.push_back({std::max(th, 0.0), {}});
    groups.back().vectors.push_back(eig.eigenvectors.col(j));
  }
  return groups;
}

}  // namespace

std::vector<double> SpectrumReport::lambdas() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.lambda);
  return out;
}

std::size_t SpectrumReport::count_with_multiplicity() const {
  std::size_t total = 0;
  for (const auto& p : points) total += p.dimension();
  return total;
}

double default_grid_step(const IntervalUnion& omega) {
  const double scale = std::max({1.0, std::abs(omega.alpha(0)), std::abs(omega.beta(omega.size() - 1))});
  return 1.0 / (8.0 * omega.measure() * scale);
}

Window default_window(const IntervalUnion& omega) {
  const double l = omega.measure();
  const double h = std::max(5.0 * l, 5.0 * static_cast<double>(omega.size()) / l);
  return {-h, h};
}

CMatrix transfer_matrix(const IntervalUnion& omega, const BoundaryMatrix& b, double lambda) {
  return exp_diag(omega.betas(), -lambda) * b.matrix() * exp_diag(omega.alphas(), lambda);
}

double root_distance(const IntervalUnion& omega, const BoundaryMatrix& b, double lambda) {
  Eigen::ComplexEigenSolver<CMatrix> solver(transfer_matrix(omega, b, lambda), false);
  double best = std::numeric_limits<double>::infinity();
  for (const cplx& mu : solver.eigenvalues()) best = std::min(best, std::abs(1.0 - mu));
  return best;
}

std::vector<CVector> nullspace_at(const IntervalUnion& omega, const BoundaryMatrix& b, double lambda,
                                  double tol_eig) {
  const CMatrix m = transfer_matrix(omega, b, lambda);
  const CMatrix a = CMatrix::Identity(m.rows(), m.cols()) - m;
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  std::vector<CVector> out;
  const auto& s = svd.singularValues();
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) < tol_eig) out.push_back(svd.matrixV().col(k));
  return out;
}

bool is_constant_vector(const CVector& c, double tol) {
  const double norm = c.norm();
  if (norm == 0.0) return false;
  const cplx mean = c.mean();
  return (c - CVector::Constant(c.size(), mean)).norm() <= tol * norm;
}

SpectrumReport compute_spectrum(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                const SpectrumOptions& options) {
  if (!(window.lo < window.hi)) throw Error(ErrorCode::InvalidArgument, "window needs lo < hi");
  if (b.size() != omega.size())
    throw Error(ErrorCode::InvalidArgument, "boundary matrix size does not match the interval count");
  const double step = options.grid_step > 0.0 ? options.grid_step : default_grid_step(omega);

  SpectrumReport report;
  report.window = window;
  report.method = SpectrumMethod::Scan;
  report.grid_step = step;
  report.phase_speed_bound = kTwoPi * omega.max_length();

  const PhaseWinding winding(omega, b);
  const double lo = window.lo - step;
  const double hi = window.hi + step;
  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  std::vector<double> grid(cells + 1), phase(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) grid[k] = std::min(hi, lo + static_cast<double>(k) * step);

  // Grid evaluations are independent; each worker fills a contiguous block.
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(cells + 1)));
  if (jobs == 1) {
    for (std::size_t k = 0; k <= cells; ++k) phase[k] = winding.phase_sum(grid[k]);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    const std::size_t block = (cells + jobs) / jobs;
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t k = w * block; k < std::min(cells + 1, (w + 1) * block); ++k)
            phase[k] = winding.phase_sum(grid[k]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  const double width_tol = 0.5 * std::min(options.tol_root, options.tol_root / (kTwoPi * omega.max_length()));
  std::vector<RawRoot> raw;
  for (std::size_t k = 0; k < cells; ++k) {
    const int count = winding.crossings(grid[k], phase[k], grid[k + 1], phase[k + 1]);
    if (count > 0) isolate(winding, grid[k], phase[k], grid[k + 1], phase[k + 1], count, width_tol, raw);
  }

  // Simultaneous crossings can be split by rounding into adjacent brackets.
  std::vector<RawRoot> merged;
  const double merge_tol = std::max(options.tol_root, 4.0 * width_tol);
  for (const auto& r : raw) {
    if (!merged.empty() && r.lambda - merged.back().lambda <= merge_tol) {
      auto& last = merged.back();
      const int total = last.multiplicity + r.multiplicity;
      last.lambda = (last.lambda * last.multiplicity + r.lambda * r.multiplicity) / total;
      last.multiplicity = total;
    } else {
      merged.push_back(r);
    }
  }

  for (const auto& r : merged) {
    if (!window.contains(r.lambda, options.tol_root)) continue;
    auto basis = nullspace_at(omega, b, r.lambda, options.tol_eig);
    if (basis.size() != static_cast<std::size_t>(r.multiplicity)) {
      std::ostringstream os;
      os.precision(15);
      os << "at lambda = " << r.lambda << " the eigenphase winding counts " << r.multiplicity
         << " crossing(s) but the eigenspace has dimension " << basis.size();
      throw Error(ErrorCode::SuspectedMissedRoot, os.str());
    }
    report.points.push_back(make_point(omega, b, r.lambda, std::move(basis)));
  }
  return report;
}

SpectrumReport equal_length_spectrum(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                     double tol_eig) {
  if (!omega.equal_lengths(omega.tolerance()))
    throw Error(ErrorCode::NotEqualLength, "intervals do not share a common length");
  if (!(window.lo < window.hi)) throw Error(ErrorCode::InvalidArgument, "window needs lo < hi");
  const double ell = omega.length(0);
  const auto alphas = omega.alphas();

  SpectrumReport report;
  report.window = window;
  report.method = SpectrumMethod::EqualLength;
  report.phase_speed_bound = kTwoPi * ell;

  for (const auto& group : phase_groups(b)) {
    const double k_lo = std::ceil(window.lo * ell - group.theta);
    const double k_hi = std::floor(window.hi * ell - group.theta);
    for (double k = k_lo; k <= k_hi; k += 1.0) {
      const double lambda = (group.theta + k) / ell;
      const auto unwind = exp_diag(alphas, -lambda);
      std::vector<CVector> basis;
      for (const auto& v : group.vectors) basis.emplace_back(unwind * v);
      auto pt = make_point(omega, b, lambda, std::move(basis));
      if (pt.eig_residual > tol_eig)
        throw Error(ErrorCode::ConvergenceFailure,
                    "eigenspace residual " + std::to_string(pt.eig_residual) + " exceeds tol_eig");
      report.points.push_back(std::move(pt));
    }
  }
  std::sort(report.points.begin(), report.points.end(),
            [](const SpectralPoint& x, const SpectralPoint& y) { return x.lambda < y.lambda; });
  return report;
}

SpectrumReport best_spectrum(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                             const SpectrumOptions& options) {
  if (omega.equal_lengths(omega.tolerance())) return equal_length_spectrum(omega, b, window, options.tol_eig);
  return compute_spectrum(omega, b, window, options);
}

std::string_view to_string(SpectralVerdict v) {
  switch (v) {
    case SpectralVerdict::SpectralExact: return "spectral_exact";
    case SpectralVerdict::SpectralOnWindow: return "spectral_on_window";
    case SpectralVerdict::NotSpectral: return "not_spectral";
    case SpectralVerdict::Undecided: return "undecided";
  }
  return "undecided";
}

SpectralCheck spectral_matrix_check(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                    const SpectrumOptions& options) {
  SpectralCheck check;
  if (omega.equal_lengths(omega.tolerance())) {
    // lambda = (theta + k) / ell and c = E(-lambda alpha) v. The k = 0 vector
    // decides each eigenphase; moving to k = 1 multiplies c_i by
    // e^{-2 pi i alpha_i / ell}, which keeps constancy iff the left endpoints
    // differ by multiples of ell.
    const double ell = omega.length(0);
    const auto alphas = omega.alphas();
    const auto groups = phase_groups(b);
    for (const auto& g : groups) {
      const double lambda = g.theta / ell;
      const auto unwind = exp_diag(alphas, -lambda);
      std::vector<CVector> basis;
      for (const auto& v : g.vectors) basis.emplace_back(unwind * v);
      if (basis.size() > 1 || !is_constant_vector(basis.front(), kConstantTol)) {
        check.verdict = SpectralVerdict::NotSpectral;
        check.witness_lambda = lambda;
        check.reason = basis.size() > 1 ? "eigenspace of dimension " + std::to_string(basis.size())
                                        : "eigenvector is not constant";
        for (auto& c : basis) normalize_phase(c);
        check.witness_basis = std::move(basis);
        return check;
      }
    }
    for (std::size_t i = 1; i < omega.size(); ++i) {
      const double q = (alphas[i] - alphas[0]) / ell;
      if (std::abs(q - std::round(q)) > omega.tolerance()) {
        const double lambda = (groups.front().theta + 1.0) / ell;
        CVector c = exp_diag(alphas, -lambda) * groups.front().vectors.front();
        normalize_phase(c);
        check.verdict = SpectralVerdict::NotSpectral;
        check.witness_lambda = lambda;
        check.witness_basis = {c};
        check.reason = "left endpoints are not congruent modulo the common length";
        return check;
      }
    }
    check.verdict = SpectralVerdict::SpectralExact;
    check.reason = "every eigenphase is simple with a constant eigenvector";
    return check;
  }

  SpectrumReport report;
  try {
    report = compute_spectrum(omega, b, window, options);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ConvergenceFailure && e.code() != ErrorCode::SuspectedMissedRoot) throw;
    check.reason = e.what();
    return check;
  }
  const SpectralPoint* witness = nullptr;
  for (const auto& p : report.points) {
    if (p.constant) continue;
    if (!witness || std::abs(p.lambda) < std::abs(witness->lambda) ||
        (std::abs(p.lambda) == std::abs(witness->lambda) && p.lambda > witness->lambda))
      witness = &p;
  }
  if (witness) {
    check.verdict = SpectralVerdict::NotSpectral;
    check.witness_lambda = witness->lambda;
    check.witness_basis = witness->basis;
    check.reason = witness->dimension() > 1
                       ? "eigenspace of dimension " + std::to_string(witness->dimension())
                       : "eigenvector is not constant";
  } else if (report.points.empty()) {
    check.reason = "no spectrum points in the window";
  } else {
    check.verdict = SpectralVerdict::SpectralOnWindow;
    check.reason = "all " + std::to_string(report.points.size()) + " eigenspaces in the window are constant lines";
  }
  return check;
}

}  // namespace spi
