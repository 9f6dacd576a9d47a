#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spi/boundary_matrix.hpp"
#include "spi/exp_poly.hpp"
#include "spi/interval_union.hpp"
#include "spi/spectrum.hpp"

namespace spi {

/// int_omega e^{2 pi i s x} dx, evaluated through sinc so that s -> 0 is exact.
cplx exp_integral(const IntervalUnion& omega, double s);

/// G_{k,l} = <e_{lambda_k}, e_{lambda_l}> in L2(omega).
CMatrix exp_gram(const IntervalUnion& omega, std::span<const double> lambdas);

struct SpectralEvidence {
  Window window;
  std::size_t count = 0;
  bool orthogonal = false;
  double max_off_diagonal = 0.0;
  /// count / (L * window width)
  double density_ratio = 0.0;
  /// |count - L * width| <= n + 1
  bool density_consistent = false;
  /// Per probe: (|f|^2 - sum |<f, e_lambda>|^2 / L) / |f|^2; window dependent.
  std::vector<double> parseval_residuals;
  double parseval_residual = 0.0;  // largest of the above
};

/// x * chi_omega and e_{0.37} * chi_omega
std::vector<PiecewiseExpPoly> default_probes(const IntervalUnion& omega);

/// Orthogonality, density and Parseval evidence that `lambdas` (restricted to
/// the window) is part of a spectrum of omega.
SpectralEvidence spectral_pair_evidence(const IntervalUnion& omega, std::span<const double> lambdas, Window window,
                                        const std::vector<PiecewiseExpPoly>& probes, double tol);

enum class CheckStatus { Pass, Fail, Skipped };
std::string_view to_string(CheckStatus s);

struct NamedCheck {
  std::string name;
  CheckStatus status = CheckStatus::Skipped;
  std::string detail;  // witness on failure, reason when skipped
};

struct ChainStep {
  std::size_t source = 0;
  double shift = 0.0;
  bool shift_in_lattice = false;
  Interval image;
};

/// Outcome of the lattice suites for permutation and weighted permutation
/// boundary matrices.
struct LatticeSuiteReport {
  StructureKind kind = StructureKind::General;
  std::vector<std::size_t> sigma;
  bool full_cycle = false;
  double measure = 0.0;
  double theta0 = 0.0;  // spectrum offset: Lambda = (Z - theta0) / L
  bool weights_ok = false;
  bool differences_in_lattice = false;  // alpha_sigma(i) - beta_i in L Z
  bool spectrum_ok = false;
  double spectrum_error = 0.0;
  std::size_t spectrum_count = 0;
  TilingCertificate tiling;
  std::vector<ChainStep> chain;
  bool chain_ok = false;
  Interval chain_union;
  bool pass = false;
  std::vector<std::string> failures;
};

/// Requires a spectral permutation matrix. Throws WrongStructure, NotSpectral.
LatticeSuiteReport multiplicative_spectral_suite(const IntervalUnion& omega, const BoundaryMatrix& b,
                                                 Window window, const SpectrumOptions& options, double tol);

/// Requires a spectral weighted permutation matrix. Throws WrongStructure,
/// NotSpectral, InconsistentTheta.
LatticeSuiteReport forelli_spectral_suite(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                          const SpectrumOptions& options, double tol);

struct StructureReport {
  SpectralCheck spectral;
  MatrixStructure structure;
  std::vector<NamedCheck> checks;
  std::optional<LatticeSuiteReport> lattice;

  const NamedCheck* find(std::string_view name) const;
};

/// Necessary conditions for spectrality: gap_criterion, adjacency, minimal_gap,
/// diagonal, unimodular_entry, interval_move, plus the lattice suite when B
/// is a (weighted) permutation. Checks that presuppose spectrality are skipped
/// when the spectral check fails.
StructureReport structure_suite(const IntervalUnion& omega, const BoundaryMatrix& b, Window window,
                                const SpectrumOptions& options, double tol);

/// The gap criterion alone: every positive alpha_j - beta_i is a sum of lengths.
NamedCheck gap_criterion(const IntervalUnion& omega, double tol);

enum class PowerCondition { Multiplicative, Forelli };

struct PowerSuiteReport {
  unsigned p = 0;
  PowerCondition condition = PowerCondition::Multiplicative;
  MatrixStructure structure;  // of B^p
  bool necessary_condition = false;
  double aggregation_error = 0.0;  // path aggregation against rows of B^p
};

/// p with (p-1) l < t0 <= p l, the structure of B^p and the verdict on the
/// implied necessary condition. Throws NotEqualLength, InvalidArgument.
PowerSuiteReport equal_length_power_suite(const IntervalUnion& omega, const BoundaryMatrix& b, double t0,
                                          PowerCondition condition, double tol);

}  // namespace spi
