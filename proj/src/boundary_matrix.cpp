#include "spi/boundary_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "spi/error.hpp"

namespace spi {

double unitarity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const CMatrix d = m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

BoundaryMatrix BoundaryMatrix::create(CMatrix entries, double tol) {
  if (entries.rows() == 0 || entries.rows() != entries.cols())
    throw Error(ErrorCode::InvalidArgument, "boundary matrix must be square and nonempty");
  if (!entries.allFinite()) throw Error(ErrorCode::NonFinite, "boundary matrix has non-finite entries");
  const CMatrix d = entries.adjoint() * entries - CMatrix::Identity(entries.rows(), entries.cols());
  Eigen::Index r = 0, c = 0;
  const double worst = d.cwiseAbs().maxCoeff(&r, &c);
  if (worst > tol) {
    std::ostringstream os;
    os << "entry (" << r << ", " << c << ") of B*B - I has modulus " << worst << " > " << tol;
    throw Error(ErrorCode::NotUnitary, os.str());
  }
  return BoundaryMatrix(std::move(entries));
}

BoundaryMatrix BoundaryMatrix::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return BoundaryMatrix(CMatrix::Identity(k, k));
}

BoundaryMatrix BoundaryMatrix::adjoint() const { return BoundaryMatrix(m_.adjoint()); }

Eigen::DiagonalMatrix<cplx, Eigen::Dynamic> exp_diag(std::span<const double> z) { return exp_diag(z, 1.0); }

Eigen::DiagonalMatrix<cplx, Eigen::Dynamic> exp_diag(std::span<const double> z, double scale) {
  CVector d(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) d(static_cast<Eigen::Index>(i)) = turn(scale * z[i]);
  return Eigen::DiagonalMatrix<cplx, Eigen::Dynamic>(d);
}

CVector exp_vector(std::span<const double> x, double lambda) {
  return exp_diag(x, lambda).diagonal();
}

bool is_full_cycle(std::span<const std::size_t> sigma) {
  if (sigma.empty()) return false;
  std::size_t steps = 0;
  std::size_t i = 0;
  do {
    i = sigma[i];
    ++steps;
  } while (i != 0 && steps <= sigma.size());
  return i == 0 && steps == sigma.size();
}

std::string_view to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::Permutation: return "Permutation";
    case StructureKind::WeightedPermutation: return "WeightedPermutation";
    case StructureKind::General: return "General";
  }
  return "General";
}

MatrixStructure classify_structure(const BoundaryMatrix& b, double tol) {
  const std::size_t n = b.size();
  MatrixStructure s;
  std::vector<std::size_t> sigma(n);
  std::vector<cplx> weights(n);
  std::vector<bool> column_taken(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t unimodular = 0, zeros = 0, col = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double m = std::abs(b(i, j));
      if (std::abs(m - 1.0) < tol) {
        ++unimodular;
        col = j;
      } else if (m < tol) {
        ++zeros;
      }
    }
    if (unimodular != 1 || zeros != n - 1 || column_taken[col]) return s;
    column_taken[col] = true;
    sigma[i] = col;
    weights[i] = b(i, col);
  }
  const bool plain = std::all_of(weights.begin(), weights.end(),
                                 [tol](cplx w) { return std::abs(w - 1.0) < tol; });
  s.kind = plain ? StructureKind::Permutation : StructureKind::WeightedPermutation;
  s.full_cycle = is_full_cycle(sigma);
  s.sigma = std::move(sigma);
  s.weights = std::move(weights);
  return s;
}

UnitaryEigenData eig_unitary(const BoundaryMatrix& b) {
  Eigen::ComplexSchur<CMatrix> schur(b.matrix());
  if (schur.info() != Eigen::Success)
    throw Error(ErrorCode::ConvergenceFailure, "Schur iteration did not converge");
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();
  const auto n = t.rows();

  // For a normal matrix the Schur form is diagonal and the Schur vectors are
  // an orthonormal eigenbasis.
  std::vector<std::pair<double, Eigen::Index>> order;
  for (Eigen::Index j = 0; j < n; ++j) {
    double theta = std::arg(t(j, j)) / kTwoPi;
    if (theta < 0.0) theta += 1.0;
    if (theta >= 1.0 - 1e-13) theta = 0.0;
    order.emplace_back(theta, j);
  }
  std::sort(order.begin(), order.end());

  UnitaryEigenData out;
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto [theta, j] = order[static_cast<std::size_t>(k)];
    out.phases.push_back(theta);
    out.eigenvectors.col(k) = u.col(j);
    const double r = (b.matrix() * u.col(j) - turn(theta) * u.col(j)).norm();
    out.max_residual = std::max(out.max_residual, r);
  }
  if (out.max_residual > 1e-8)
    throw Error(ErrorCode::ConvergenceFailure,
                "eigenvector residual " + std::to_string(out.max_residual) + " exceeds 1e-8");
  return out;
}

BoundaryMatrix matrix_from_spectrum(const IntervalUnion& omega, std::span<const double> lambdas,
                                    double tol) {
  const auto n = static_cast<Eigen::Index>(omega.size());
  const auto alphas = omega.alphas();
  const auto betas = omega.betas();

  CMatrix from(n, 0), to(n, 0);
  std::vector<std::size_t> used;
  for (std::size_t k = 0; k < lambdas.size() && from.cols() < n; ++k) {
    CMatrix trial(n, from.cols() + 1);
    trial << from, exp_vector(alphas, lambdas[k]) / std::sqrt(static_cast<double>(n));
    Eigen::JacobiSVD<CMatrix> svd(trial);
    if (svd.singularValues().minCoeff() < 1e-6) continue;
    from = trial;
    to.conservativeResize(n, to.cols() + 1);
    to.col(to.cols() - 1) = exp_vector(betas, lambdas[k]) / std::sqrt(static_cast<double>(n));
    used.push_back(k);
  }
  if (from.cols() < n)
    throw Error(ErrorCode::DeficientSpan, "boundary vectors e_lambda(alpha) of the " +
                                              std::to_string(lambdas.size()) +
                                              " samples span only dimension " +
                                              std::to_string(from.cols()) + " of " + std::to_string(n));

  CMatrix fitted = from.transpose().partialPivLu().solve(to.transpose()).transpose();

  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (std::find(used.begin(), used.end(), k) != used.end()) continue;
    const double r = (fitted * exp_vector(alphas, lambdas[k]) - exp_vector(betas, lambdas[k])).norm();
    if (r > tol) {
      std::ostringstream os;
      os << "sample lambda = " << lambdas[k] << " violates the fitted boundary condition by " << r;
      throw Error(ErrorCode::Inconsistent, os.str());
    }
  }
  return BoundaryMatrix::create(std::move(fitted), tol);
}

bool forelli_weight_check(const BoundaryMatrix& b, const IntervalUnion& omega, double theta0,
                          double tol) {
  const auto s = classify_structure(b, tol);
  if (s.kind == StructureKind::General)
    throw Error(ErrorCode::WrongStructure, "Forelli weights need a weighted permutation matrix");
  const double total = omega.measure();
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double shift = omega.alpha(s.sigma[i]) - omega.beta(i);
    if (std::abs(s.weights[i] - turn(theta0 / total * shift)) > tol) return false;
    if (std::abs(shift / total - std::round(shift / total)) > tol) return false;
  }
  return true;
}

BoundaryMatrix power(const BoundaryMatrix& b, unsigned p) {
  if (p == 0) throw Error(ErrorCode::InvalidArgument, "matrix power needs p >= 1");
  CMatrix result = CMatrix::Identity(b.matrix().rows(), b.matrix().cols());
  CMatrix base = b.matrix();
  for (unsigned e = p; e > 0; e >>= 1) {
    if (e & 1u) result = result * base;
    if (e > 1) base = base * base;
  }
  return BoundaryMatrix::create(std::move(result), p * BoundaryMatrix::kDefaultUnitaryTol + 1e-12);
}

bool rational_order_check(const BoundaryMatrix& b, unsigned d, unsigned n) {
  const CMatrix m = power(b, d * n).matrix();
  return (m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() < 1e-7;
}

BoundaryMatrix reflected_matrix(const BoundaryMatrix& b) {
  return BoundaryMatrix::create(b.matrix().adjoint().reverse(), BoundaryMatrix::kDefaultUnitaryTol);
}

}  // namespace spi
