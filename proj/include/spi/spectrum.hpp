#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spi/boundary_matrix.hpp"
#include "spi/interval_union.hpp"

namespace spi {

struct Window {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

/// One eigenvalue of D_B with its eigenspace {c : B E(lambda alpha) c = E(lambda beta) c}.
struct SpectralPoint {
  double lambda = 0.0;
  std::vector<CVector> basis;  // orthonormal
  bool constant = false;       // dimension 1 and basis vector parallel to (1, ..., 1)
  double root_residual = 0.0;  // min_j |1 - mu_j(M(lambda))|
  double eig_residual = 0.0;   // max over basis of |B E(lambda alpha) c - E(lambda beta) c|

  std::size_t dimension() const { return basis.size(); }
};

enum class SpectrumMethod { Scan, EqualLength };

struct SpectrumReport {
  Window window;
  SpectrumMethod method = SpectrumMethod::Scan;
  std::vector<SpectralPoint> points;  // strictly increasing lambda
  double grid_step = 0.0;
  /// Eigenphases of M(lambda) move with speed at most 2 pi * max_length.
  double phase_speed_bound = 0.0;

  std::vector<double> lambdas() const;
  std::size_t count_with_multiplicity() const;
};

struct SpectrumOptions {
  double grid_step = 0.0;  // <= 0 selects default_grid_step
  double tol_root = 1e-10;
  double tol_eig = 1e-8;
  unsigned jobs = 1;
};

/// 1 / (8 L max(1, |alpha_1|, |beta_n|))
double default_grid_step(const IntervalUnion& omega);

/// [-h, h] with h = max(5 L, 5 n / L), wide enough for about 10 n points.
Window default_window(const IntervalUnion& omega);

/// M(lambda) = E(lambda beta)^* B E(lambda alpha)
CMatrix transfer_matrix(const IntervalUnion& omega, const BoundaryMatrix& b, double lambda);

/// min_j |1 - mu_j(M(lambda))|
double root_distance(const IntervalUnion& omega, const BoundaryMatrix& b, double lambda);

/// Orthonormal basis of ker(I - M(lambda)) using the singular-value cutoff tol_eig.
std::vector<CVector> nullspace_at(const IntervalUnion& omega, const BoundaryMatrix& b, double lambda,
                                  double tol_eig);

/// All eigenvalues of D_B in the window.
///
/// Roots are counted exactly per grid cell from the winding of the eigenphases
/// of M(lambda) and isolated by bisection on that count. Throws
/// ConvergenceFailure or SuspectedMissedRoot.
SpectrumReport compute_spectrum(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                const SpectrumOptions& options = {});

/// Spectrum from the eigenphases of B when every interval has the same length.
/// Throws NotEqualLength.
SpectrumReport equal_length_spectrum(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                     double tol_eig = 1e-8);

/// True when c is a nonzero multiple of (1, ..., 1).
bool is_constant_vector(const CVector& c, double tol);

enum class SpectralVerdict { SpectralExact, SpectralOnWindow, NotSpectral, Undecided };

std::string_view to_string(SpectralVerdict v);

struct SpectralCheck {
  SpectralVerdict verdict = SpectralVerdict::Undecided;
  std::optional<double> witness_lambda;
  std::vector<CVector> witness_basis;
  std::string reason;

  bool spectral() const {
    return verdict == SpectralVerdict::SpectralExact || verdict == SpectralVerdict::SpectralOnWindow;
  }
};

/// Decides whether every eigenspace of D_B is spanned by a constant vector.
/// Exact for equal lengths; otherwise limited to the window.
SpectralCheck spectral_matrix_check(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                    const SpectrumOptions& options = {});

/// Picks the equal-length shortcut when applicable.
SpectrumReport best_spectrum(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                             const SpectrumOptions& options = {});

}  // namespace spi
