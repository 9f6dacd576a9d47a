#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "spi/interval_union.hpp"

namespace spi {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// e^{2 pi i x}
inline cplx turn(double x) { return std::polar(1.0, kTwoPi * x); }

/// Unitary n x n matrix B encoding the boundary condition B f(alpha) = f(beta).
class BoundaryMatrix {
 public:
  static constexpr double kDefaultUnitaryTol = 1e-10;

  /// Throws NotUnitary, naming the worst entry of B*B - I, when any entry
  /// deviates by more than `tol`.
  static BoundaryMatrix create(CMatrix entries, double tol = kDefaultUnitaryTol);
  static BoundaryMatrix identity(std::size_t n);

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  BoundaryMatrix adjoint() const;

 private:
  explicit BoundaryMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Max-entry deviation of M*M from the identity.
double unitarity_defect(const CMatrix& m);

/// diag(e^{2 pi i z_1}, ..., e^{2 pi i z_n})
Eigen::DiagonalMatrix<cplx, Eigen::Dynamic> exp_diag(std::span<const double> z);
/// exp_diag(scale * z)
Eigen::DiagonalMatrix<cplx, Eigen::Dynamic> exp_diag(std::span<const double> z, double scale);

enum class StructureKind { Permutation, WeightedPermutation, General };

struct MatrixStructure {
  StructureKind kind = StructureKind::General;
  std::vector<std::size_t> sigma;  // row i -> column sigma[i]; empty for General
  std::vector<cplx> weights;       // b_{i, sigma(i)}; empty for General
  bool full_cycle = false;         // sigma is a single n-cycle

  /// The group is multiplicative for every t exactly for permutation matrices.
  bool multiplicative_group() const { return kind == StructureKind::Permutation; }
  /// The group satisfies the Forelli condition exactly for weighted permutations.
  bool forelli_group() const { return kind != StructureKind::General; }
};

/// An entry is unimodular when ||b| - 1| < tol and zero when |b| < tol.
MatrixStructure classify_structure(const BoundaryMatrix& b, double tol = 1e-10);

/// True when sigma is a single cycle through all indices.
bool is_full_cycle(std::span<const std::size_t> sigma);

std::string_view to_string(StructureKind kind);

struct UnitaryEigenData {
  std::vector<double> phases;  // theta_j in [0, 1), ascending
  CMatrix eigenvectors;        // column j belongs to phases[j]; orthonormal
  double max_residual = 0.0;   // max_j |B v_j - e^{2 pi i theta_j} v_j|
};

/// Eigenphases and an orthonormal eigenbasis from the complex Schur form
/// (Hessenberg reduction followed by shifted QR). Throws ConvergenceFailure.
UnitaryEigenData eig_unitary(const BoundaryMatrix& b);

/// Boundary vectors (e^{2 pi i lambda x_1}, ..., e^{2 pi i lambda x_n}).
CVector exp_vector(std::span<const double> x, double lambda);

/// The unique B with B e_lambda(alpha) = e_lambda(beta) on the sample points.
/// Uses the first n samples with spanning boundary vectors and validates the
/// remaining ones. Throws DeficientSpan, Inconsistent, NotUnitary.
BoundaryMatrix matrix_from_spectrum(const IntervalUnion& omega, std::span<const double> lambdas,
                                    double tol);

/// Checks b_{i,sigma(i)} = e^{2 pi i (theta0/L)(alpha_sigma(i) - beta_i)} and
/// alpha_sigma(i) - beta_i in L*Z. Throws WrongStructure for General B.
bool forelli_weight_check(const BoundaryMatrix& b, const IntervalUnion& omega, double theta0,
                          double tol);

BoundaryMatrix power(const BoundaryMatrix& b, unsigned p);

/// max |B^(d*n) - I| < 1e-7
bool rational_order_check(const BoundaryMatrix& b, unsigned d, unsigned n);

/// Boundary matrix of the reflected set -omega in its sorted interval order:
/// R B* R with R the index reversal.
BoundaryMatrix reflected_matrix(const BoundaryMatrix& b);

}  // namespace spi
