#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace spi {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo < x && x < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// A finite union of disjoint open intervals, sorted left to right.
///
/// Adjacent intervals may share an endpoint; they are kept as separate
/// intervals and never merged.
class IntervalUnion {
 public:
  /// Validates and sorts. Throws EmptyInterval, NonFinite,
  /// OverlappingIntervals or InvalidArgument (empty list).
  static IntervalUnion create(std::vector<Interval> intervals);
  static IntervalUnion create(std::span<const std::pair<double, double>> endpoints);

  std::size_t size() const { return intervals_.size(); }
  const Interval& operator[](std::size_t i) const { return intervals_[i]; }
  std::span<const Interval> intervals() const { return intervals_; }

  double alpha(std::size_t i) const { return intervals_[i].lo; }
  double beta(std::size_t i) const { return intervals_[i].hi; }
  double length(std::size_t i) const { return intervals_[i].length(); }
  std::vector<double> alphas() const;
  std::vector<double> betas() const;
  std::vector<double> lengths() const;
  /// Consecutive gaps alpha(i+1) - beta(i); size() - 1 entries.
  std::vector<double> gaps() const;

  double measure() const { return measure_; }
  double min_length() const { return min_length_; }
  double max_length() const { return max_length_; }
  double diameter() const { return intervals_.back().hi - intervals_.front().lo; }

  /// Absolute comparison tolerance for endpoint arithmetic:
  /// 1e-9 * max(1, |alpha_1|, |beta_n|).
  double tolerance() const;

  /// Index of the open interval containing x.
  std::optional<std::size_t> locate(double x) const;

  bool equal_lengths(double tol) const;

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  explicit IntervalUnion(std::vector<Interval> intervals);

  std::vector<Interval> intervals_;
  double measure_ = 0.0;
  double min_length_ = 0.0;
  double max_length_ = 0.0;
};

/// Multisets of interval lengths (distinct length values, repetition allowed)
/// whose sum matches `gap` within `tol`. Each multiset is sorted ascending.
/// Throws GuardExceeded once more than `max_candidates` combinations have been
/// examined.
std::vector<std::vector<double>> gap_decomposition(const IntervalUnion& omega, double gap, double tol,
                                                   std::size_t max_candidates = 1'000'000);

struct ModPiece {
  double lo = 0.0;  // in [0, a)
  double hi = 0.0;  // in (lo, a]
  std::size_t source = 0;
};

struct TilingCertificate {
  bool tiles = false;
  double modulus = 0.0;
  std::vector<ModPiece> pieces;
  std::vector<Interval> holes;     // parts of [0, a) not covered
  std::vector<Interval> overlaps;  // parts of [0, a) covered more than once
};

/// Decides whether the translates omega + a*k, k in Z, partition R up to
/// measure zero, by projecting each interval onto [0, a).
TilingCertificate tiles_by_lattice(const IntervalUnion& omega, double a, double tol);

/// True iff omega and omega + k*a meet in a null set for every nonzero k.
bool translates_disjoint(const IntervalUnion& omega, double a);

struct CongruencePiece {
  std::size_t source = 0;
  double shift = 0.0;
  Interval image;
};

struct CongruenceMap {
  double modulus = 0.0;
  Interval target;
  std::vector<CongruencePiece> pieces;  // ordered left to right along target
};

/// Shifts whole intervals by integer multiples of `a` so that they tile
/// (alpha_1, alpha_1 + L). Exhaustive search over the fill order.
std::optional<CongruenceMap> translation_congruence_to_interval(const IntervalUnion& omega, double a,
                                                                double tol);

/// -omega, re-sorted. Interval i of omega becomes interval n-1-i.
IntervalUnion reflect(const IntervalUnion& omega);

/// Removes interval `j` and extends interval `i` to (alpha_i, alpha_i + l_i + l_j).
/// Throws MoveCollision when the extension overlaps a third interval.
IntervalUnion move_interval(const IntervalUnion& omega, std::size_t j, std::size_t i);

/// Lebesgue measure of the intersection of two unions.
double intersection_measure(std::span<const Interval> a, std::span<const Interval> b);

}  // namespace spi
