#pragma once

#include <cstddef>
#include <vector>

#include "spi/boundary_matrix.hpp"
#include "spi/interval_union.hpp"

namespace spi {

enum class Direction { Forward, Backward };

/// An admissible path i_1 ... i_m for a start point x and a time t.
///
/// Forward (t >= 0): the point leaves each interval through its right endpoint
/// and re-enters at a left endpoint; end = alpha_{i_m} + remainder. Backward
/// (t < 0) mirrors this with end = beta_{i_m} - remainder and adjoint weights.
/// For m = 1 the remainder is the distance from the entry endpoint of i_1 to
/// the end point, so the end formula holds uniformly.
struct Path {
  std::vector<std::size_t> word;
  Direction direction = Direction::Forward;
  double remainder = 0.0;
  double end = 0.0;
  cplx weight{1.0, 0.0};
  /// Time spent before entering the last interval (exit distance plus the
  /// lengths of the intermediate intervals); zero for m = 1.
  double elapsed = 0.0;
};

struct PathSet {
  double x = 0.0;
  double t = 0.0;
  std::size_t start = 0;
  std::vector<Path> paths;
};

/// Default cap on enumerated paths; SPECTRAL_INTERVALS_MAX_PATHS overrides it.
std::size_t default_path_cap();

/// n^{ceil(|t| / lmin) + 1}, the a priori bound on |P_{x,t}|.
double predicted_path_bound(const IntervalUnion& omega, double t);

/// Complete set of admissible paths. Throws XNotInOmega, GuardExceeded.
PathSet enumerate_paths(const IntervalUnion& omega, const BoundaryMatrix& b, double x, double t,
                        std::size_t cap = default_path_cap());

struct EndSum {
  double end = 0.0;
  cplx sum{0.0, 0.0};
  std::size_t paths = 0;
  /// Ends merged here differ by more than rounding: analytically distinct
  /// ends closer than the merge tolerance.
  bool near_collision = false;
};

/// Path weights summed per distinct end, ordered by end. Ends within
/// `merge_tol` are merged.
std::vector<EndSum> path_sum_by_end(const std::vector<Path>& paths, double merge_tol);
/// merge_tol = 1e-9 * max(1, |beta_n|, |alpha_1|)
std::vector<EndSum> path_sum_by_end(const PathSet& set, const IntervalUnion& omega);

struct LocalTranslationIdentities {
  bool pass = false;
  bool target_reached = false;  // x + t is one of the ends
  cplx target_sum{0.0, 0.0};
  double max_other = 0.0;  // largest |sum| over ends other than x + t
  std::vector<EndSum> offending;
  std::vector<EndSum> ends;
};

/// Sum of weights ending at x + t equals 1, every other end sums to 0.
/// Throws XNotInOmega, XPlusTNotInOmega, GuardExceeded.
LocalTranslationIdentities local_translation_identities(const IntervalUnion& omega, const BoundaryMatrix& b,
                                                        double x, double t, double tol);

struct EqualLengthAggregate {
  std::size_t row = 0;
  unsigned p = 0;
  double common_remainder = 0.0;
  CVector from_paths;
  CVector from_power;
  double max_difference = 0.0;
};

/// Coefficient of f(alpha_j + r) gathered from raw path enumeration next to
/// row i of B^p. Requires equal lengths and (p-1) l < t - (beta_i - x) < p l.
/// Throws NotEqualLength, PreconditionViolated.
EqualLengthAggregate aggregate_equal_length(const IntervalUnion& omega, const BoundaryMatrix& b, double x,
                                            double t, unsigned p);

}  // namespace spi
