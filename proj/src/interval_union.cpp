#include "spi/interval_union.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

namespace {

std::string describe(const Interval& iv) {
  std::ostringstream os;
  os.precision(17);
  os << '(' << iv.lo << ", " << iv.hi << ')';
  return os.str();
}

}  // namespace

IntervalUnion::IntervalUnion(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  min_length_ = intervals_.front().length();
  max_length_ = min_length_;
  for (const auto& iv : intervals_) {
    measure_ += iv.length();
    min_length_ = std::min(min_length_, iv.length());
    max_length_ = std::max(max_length_, iv.length());
  }
}

IntervalUnion IntervalUnion::create(std::vector<Interval> intervals) {
  if (intervals.empty()) throw Error(ErrorCode::InvalidArgument, "interval list is empty");
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi))
      throw Error(ErrorCode::NonFinite, "non-finite endpoint in " + describe(iv));
    if (!(iv.hi > iv.lo)) throw Error(ErrorCode::EmptyInterval, "beta <= alpha in " + describe(iv));
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i + 1 < intervals.size(); ++i) {
    // Shared endpoints are allowed, any positive overlap is not.
    if (intervals[i + 1].lo < intervals[i].hi)
      throw Error(ErrorCode::OverlappingIntervals,
                  describe(intervals[i]) + " overlaps " + describe(intervals[i + 1]));
  }
  return IntervalUnion(std::move(intervals));
}

IntervalUnion IntervalUnion::create(std::span<const std::pair<double, double>> endpoints) {
  std::vector<Interval> v;
  v.reserve(endpoints.size());
  for (const auto& [a, b] : endpoints) v.push_back({a, b});
  return create(std::move(v));
}

std::vector<double> IntervalUnion::alphas() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) out.push_back(iv.lo);
  return out;
}

std::vector<double> IntervalUnion::betas() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) out.push_back(iv.hi);
  return out;
}

std::vector<double> IntervalUnion::lengths() const {
  std::vector<double> out;
  for (const auto& iv : intervals_) out.push_back(iv.length());
  return out;
}

std::vector<double> IntervalUnion::gaps() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < intervals_.size(); ++i)
    out.push_back(intervals_[i + 1].lo - intervals_[i].hi);
  return out;
}

double IntervalUnion::tolerance() const {
  return 1e-9 * std::max({1.0, std::abs(intervals_.front().lo), std::abs(intervals_.back().hi)});
}

std::optional<std::size_t> IntervalUnion::locate(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == intervals_.begin()) return std::nullopt;
  --it;
  if (it->contains(x)) return static_cast<std::size_t>(it - intervals_.begin());
  return std::nullopt;
}

bool IntervalUnion::equal_lengths(double tol) const { return max_length_ - min_length_ <= tol; }

std::vector<std::vector<double>> gap_decomposition(const IntervalUnion& omega, double gap, double tol,
                                                   std::size_t max_candidates) {
  if (!(gap > 0.0) || !(tol > 0.0))
    throw Error(ErrorCode::InvalidArgument, "gap and tol must be positive");

  // Distinct length values; witnesses with equal lengths collapse.
  std::vector<double> values = omega.lengths();
  std::sort(values.begin(), values.end());
  std::vector<double> distinct;
  for (double v : values)
    if (distinct.empty() || v - distinct.back() > tol) distinct.push_back(v);

  const auto max_terms = static_cast<std::size_t>(std::floor((gap + tol) / omega.min_length()));
  std::vector<std::vector<double>> found;
  std::vector<double> current;
  std::size_t examined = 0;

  // Nondecreasing index order enumerates each multiset once.
  std::function<void(std::size_t, double)> search = [&](std::size_t start, double sum) {
    if (++examined > max_candidates)
      throw Error(ErrorCode::GuardExceeded, "gap decomposition examined more than " +
                                                std::to_string(max_candidates) + " combinations");
    if (std::abs(sum - gap) <= tol) {
      found.push_back(current);
      return;
    }
    if (current.size() >= max_terms) return;
    for (std::size_t k = start; k < distinct.size(); ++k) {
      if (sum + distinct[k] > gap + tol) break;
      current.push_back(distinct[k]);
      search(k, sum + distinct[k]);
      current.pop_back();
    }
  };
  search(0, 0.0);
  return found;
}

namespace {

// Splits [lo, hi) into pieces of [0, a) modulo a.
void project_mod(double lo, double hi, double a, double tol, std::size_t source,
                 std::vector<ModPiece>& out) {
  double k = std::floor(lo / a);
  double start = lo - k * a;
  if (start >= a - tol) {
    start = 0.0;
    k += 1.0;
  }
  double remaining = hi - lo;
  while (remaining > tol) {
    const double len = std::min(remaining, a - start);
    out.push_back({start, start + len, source});
    remaining -= len;
    start = 0.0;
  }
}

}  // namespace

TilingCertificate tiles_by_lattice(const IntervalUnion& omega, double a, double tol) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "lattice modulus must be positive");
  TilingCertificate cert;
  cert.modulus = a;
  for (std::size_t i = 0; i < omega.size(); ++i)
    project_mod(omega.alpha(i), omega.beta(i), a, tol, i, cert.pieces);

  // Sweep the coverage count over [0, a).
  std::vector<std::pair<double, int>> events;
  for (const auto& p : cert.pieces) {
    events.emplace_back(p.lo, +1);
    events.emplace_back(p.hi, -1);
  }
  events.emplace_back(0.0, 0);
  events.emplace_back(a, 0);
  std::sort(events.begin(), events.end());
  int depth = 0;
  for (std::size_t e = 0; e + 1 < events.size(); ++e) {
    depth += events[e].second;
    const double lo = std::max(0.0, events[e].first);
    const double hi = std::min(a, events[e + 1].first);
    if (hi - lo <= tol) continue;
    if (depth == 0) cert.holes.push_back({lo, hi});
    if (depth > 1) cert.overlaps.push_back({lo, hi});
  }
  cert.tiles = cert.holes.empty() && cert.overlaps.empty();
  return cert;
}

double intersection_measure(std::span<const Interval> a, std::span<const Interval> b) {
  double total = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) total += std::max(0.0, std::min(x.hi, y.hi) - std::max(x.lo, y.lo));
  return total;
}

bool translates_disjoint(const IntervalUnion& omega, double a) {
  if (a == 0.0 || !std::isfinite(a))
    throw Error(ErrorCode::InvalidArgument, "translation step must be finite and nonzero");
  const double step = std::abs(a);
  const double tol = omega.tolerance();
  std::vector<Interval> shifted(omega.intervals().begin(), omega.intervals().end());
  // omega ∩ (omega - ka) is a translate of omega ∩ (omega + ka); k > 0 suffices.
  for (double k = 1.0; k * step < omega.diameter(); k += 1.0) {
    for (std::size_t i = 0; i < omega.size(); ++i)
      shifted[i] = {omega.alpha(i) + k * step, omega.beta(i) + k * step};
    if (intersection_measure(omega.intervals(), shifted) > tol) return false;
  }
  return true;
}

std::optional<CongruenceMap> translation_congruence_to_interval(const IntervalUnion& omega, double a,
                                                                double tol) {
  if (!(a > 0.0)) throw Error(ErrorCode::InvalidArgument, "congruence modulus must be positive");
  const double start = omega.alpha(0);
  const double end = start + omega.measure();
  const std::size_t n = omega.size();

  CongruenceMap map{a, {start, end}, {}};
  std::vector<bool> used(n, false);

  std::function<bool(double)> fill = [&](double pos) -> bool {
    if (map.pieces.size() == n) return std::abs(pos - end) <= tol;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double shift = pos - omega.alpha(i);
      const double k = std::round(shift / a);
      if (std::abs(shift - k * a) > tol) continue;
      if (pos + omega.length(i) > end + tol) continue;
      used[i] = true;
      map.pieces.push_back({i, k * a, {omega.alpha(i) + k * a, omega.beta(i) + k * a}});
      if (fill(pos + omega.length(i))) return true;
      map.pieces.pop_back();
      used[i] = false;
    }
    return false;
  };
  if (fill(start)) return map;
  return std::nullopt;
}

IntervalUnion reflect(const IntervalUnion& omega) {
  std::vector<Interval> out;
  out.reserve(omega.size());
  for (std::size_t i = omega.size(); i-- > 0;) out.push_back({-omega.beta(i), -omega.alpha(i)});
  return IntervalUnion::create(std::move(out));
}

IntervalUnion move_interval(const IntervalUnion& omega, std::size_t j, std::size_t i) {
  const std::size_t n = omega.size();
  if (i >= n || j >= n || i == j)
    throw Error(ErrorCode::InvalidArgument, "move_interval needs two distinct valid indices");
  const Interval grown{omega.alpha(i), omega.alpha(i) + omega.length(i) + omega.length(j)};
  const double tol = omega.tolerance();
  std::vector<Interval> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    const auto& other = omega[k];
    if (std::min(other.hi, grown.hi) - std::max(other.lo, grown.lo) > tol)
      throw Error(ErrorCode::MoveCollision,
                  "moved interval " + describe(grown) + " overlaps " + describe(other));
    out.push_back(other);
  }
  out.push_back(grown);
  // Endpoints that coincide up to rounding are snapped so validation sees a
  // shared endpoint rather than a tiny overlap.
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  for (std::size_t k = 0; k + 1 < out.size(); ++k)
    if (out[k].hi > out[k + 1].lo && out[k].hi - out[k + 1].lo <= tol) out[k].hi = out[k + 1].lo;
  return IntervalUnion::create(std::move(out));
}

}  // namespace spi
