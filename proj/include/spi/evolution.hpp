#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spi/boundary_matrix.hpp"
#include "spi/exp_poly.hpp"
#include "spi/interval_union.hpp"
#include "spi/paths.hpp"
#include "spi/spectrum.hpp"

namespace spi {

/// One shifted copy of f feeding a sub-piece: the contribution is
/// weight * f(x + shift) with x + shift inside interval `source`.
struct Contribution {
  std::size_t source = 0;
  double shift = 0.0;
  cplx weight{1.0, 0.0};
  /// Time between leaving the start interval and entering `source`; negative
  /// for the interior translation that never leaves the start interval.
  double entry_time = -1.0;
};

struct SubPiece {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<Contribution> contributions;
};

struct EvolutionResult {
  PiecewiseExpPoly function;
  std::vector<std::vector<SubPiece>> refinement;  // per interval, ordered
  std::size_t event_count = 0;                    // merged arrival events
  double predicted_paths = 0.0;                   // a priori path bound
};

/// U(t) f evaluated in closed form from the admissible-path expansion.
/// Arrivals with equal (interval, entry time) are merged before expanding, so
/// the cap applies to merged events. Throws GuardExceeded, InvalidArgument.
EvolutionResult apply_U_paths(const IntervalUnion& omega, const BoundaryMatrix& b, double t,
                              const PiecewiseExpPoly& f, std::size_t cap = default_path_cap());

/// [U(t) f](x) as the weighted sum of f over the ends of every admissible path.
cplx evaluate_U_at(const IntervalUnion& omega, const BoundaryMatrix& b, double t, const PiecewiseExpPoly& f,
                   double x, std::size_t cap = default_path_cap());

/// |B f(alpha) - f(beta)|
double boundary_defect(const BoundaryMatrix& b, const PiecewiseExpPoly& f);
bool boundary_condition_check(const BoundaryMatrix& b, const PiecewiseExpPoly& f, double tol);

struct EigenTerm {
  double lambda = 0.0;
  CVector c;
  cplx amplitude{1.0, 0.0};
};

/// sum_k a_k e^{2 pi i lambda_k t} phi_k where phi_k = e_{lambda_k} sum c_i chi_i.
/// Every term must be an eigenfunction listed in the report. Throws
/// NotEigenCombination.
PiecewiseExpPoly apply_U_spectral(const IntervalUnion& omega, const SpectrumReport& spectrum, double t,
                                  const std::vector<EigenTerm>& terms);

/// f = sum of the terms at t = 0.
PiecewiseExpPoly eigen_combination(const IntervalUnion& omega, const std::vector<EigenTerm>& terms);

/// Random exp-poly on omega with B f(alpha) = f(beta): random atoms of
/// frequency in [-max_frequency, max_frequency] and degree <= 2, corrected by
/// an affine term on every interval.
template <class Rng>
PiecewiseExpPoly random_domain_function(const IntervalUnion& omega, const BoundaryMatrix& b, Rng& rng,
                                        double max_frequency = 3.0, std::size_t atoms_per_interval = 2);

struct TranslationWitness {
  double x = 0.0;
  double t = 0.0;
  cplx evolved{0.0, 0.0};
  cplx translated{0.0, 0.0};
};

struct LocalTranslationReport {
  bool pass = false;
  std::size_t trials = 0;
  double max_error = 0.0;
  std::optional<TranslationWitness> witness;  // first failing trial
};

/// Random (x, t, f) with x, x + t in omega and f in the domain of D_B;
/// checks [U(t) f](x) = f(x + t).
LocalTranslationReport local_translation_test(const IntervalUnion& omega, const BoundaryMatrix& b,
                                              std::size_t trials, double tol, std::uint64_t seed = 20240611);

struct ReflectionReport {
  bool pass = false;
  double max_error = 0.0;
};

/// U_{B'}(t) J f on -omega against J U_B(-t) f, where B' is the boundary
/// matrix of -omega.
ReflectionReport reflection_consistency(const IntervalUnion& omega, const BoundaryMatrix& b, double t,
                                        const PiecewiseExpPoly& f, double tol);

}  // namespace spi

#include "spi/evolution_random.hpp"
