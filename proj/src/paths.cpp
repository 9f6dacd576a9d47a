#include "spi/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

std::size_t default_path_cap() {
  if (const char* env = std::getenv("SPECTRAL_INTERVALS_MAX_PATHS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1'000'000;
}

double predicted_path_bound(const IntervalUnion& omega, double t) {
  const double steps = std::ceil(std::abs(t) / omega.min_length()) + 1.0;
  return std::pow(static_cast<double>(omega.size()), steps);
}

namespace {

class PathEnumerator {
 public:
  PathEnumerator(const IntervalUnion& omega, const BoundaryMatrix& b, double t, std::size_t cap,
                 std::vector<Path>& out)
      : omega_(omega), b_(b), time_(std::abs(t)), forward_(t >= 0.0), cap_(cap), out_(out) {}

  void run(std::size_t start, double exit_distance) {
    word_.assign(1, start);
    descend(exit_distance, cplx{1.0, 0.0});
  }

 private:
  cplx step_weight(std::size_t from, std::size_t to) const {
    return forward_ ? b_(from, to) : std::conj(b_(to, from));
  }

  void descend(double elapsed, cplx weight) {
    const std::size_t from = word_.back();
    for (std::size_t j = 0; j < omega_.size(); ++j) {
      const cplx w = weight * step_weight(from, j);
      word_.push_back(j);
      if (time_ < elapsed + omega_.length(j)) {
        emit(j, elapsed, w);
      } else {
        descend(elapsed + omega_.length(j), w);
      }
      word_.pop_back();
    }
  }

  void emit(std::size_t last, double elapsed, cplx weight) {
    if (out_.size() >= cap_) {
      std::ostringstream os;
      os << "more than " << cap_ << " admissible paths (a priori bound "
         << predicted_path_bound(omega_, time_) << ")";
      throw Error(ErrorCode::GuardExceeded, os.str());
    }
    Path p;
    p.word = word_;
    p.direction = forward_ ? Direction::Forward : Direction::Backward;
    p.remainder = time_ - elapsed;
    p.end = forward_ ? omega_.alpha(last) + p.remainder : omega_.beta(last) - p.remainder;
    p.weight = weight;
    p.elapsed = elapsed;
    out_.push_back(std::move(p));
  }

  const IntervalUnion& omega_;
  const BoundaryMatrix& b_;
  double time_;
  bool forward_;
  std::size_t cap_;
  std::vector<Path>& out_;
  std::vector<std::size_t> word_;
};

}  // namespace

PathSet enumerate_paths(const IntervalUnion& omega, const BoundaryMatrix& b, double x, double t,
                        std::size_t cap) {
  const auto start = omega.locate(x);
  if (!start) {
    std::ostringstream os;
    os << "x = " << x << " is not inside an interval";
    throw Error(ErrorCode::XNotInOmega, os.str());
  }
  if (b.size() != omega.size())
    throw Error(ErrorCode::InvalidArgument, "boundary matrix size does not match the interval count");
  PathSet set;
  set.x = x;
  set.t = t;
  set.start = *start;
  const std::size_t i = *start;
  const bool forward = t >= 0.0;
  const double exit_distance = forward ? omega.beta(i) - x : x - omega.alpha(i);

  if (std::abs(t) < exit_distance) {
    Path p;
    p.word = {i};
    p.direction = forward ? Direction::Forward : Direction::Backward;
    p.end = x + t;
    p.remainder = forward ? p.end - omega.alpha(i) : omega.beta(i) - p.end;
    set.paths.push_back(std::move(p));
    return set;
  }
  PathEnumerator(omega, b, t, cap, set.paths).run(i, exit_distance);
  return set;
}

std::vector<EndSum> path_sum_by_end(const std::vector<Path>& paths, double merge_tol) {
  std::vector<const Path*> sorted;
  sorted.reserve(paths.size());
  for (const auto& p : paths) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(), [](const Path* a, const Path* b) { return a->end < b->end; });

  std::vector<EndSum> out;
  double first = 0.0, last = 0.0;
  for (const Path* p : sorted) {
    if (out.empty() || p->end - first > merge_tol) {
      if (!out.empty()) out.back().near_collision = last - first > 1e-12 * std::max(1.0, std::abs(first));
      out.push_back({p->end, p->weight, 1, false});
      first = last = p->end;
    } else {
      out.back().sum += p->weight;
      ++out.back().paths;
      last = p->end;
    }
  }
  if (!out.empty()) out.back().near_collision = last - first > 1e-12 * std::max(1.0, std::abs(first));
  return out;
}

std::vector<EndSum> path_sum_by_end(const PathSet& set, const IntervalUnion& omega) {
  return path_sum_by_end(set.paths, omega.tolerance());
}

LocalTranslationIdentities local_translation_identities(const IntervalUnion& omega, const BoundaryMatrix& b,
                                                        double x, double t, double tol) {
  if (!omega.locate(x)) throw Error(ErrorCode::XNotInOmega, "x = " + std::to_string(x) + " is not in omega");
  if (!omega.locate(x + t))
    throw Error(ErrorCode::XPlusTNotInOmega, "x + t = " + std::to_string(x + t) + " is not in omega");
  const auto set = enumerate_paths(omega, b, x, t);
  LocalTranslationIdentities out;
  out.ends = path_sum_by_end(set, omega);
  const double target = x + t;
  for (const auto& e : out.ends) {
    if (std::abs(e.end - target) <= omega.tolerance()) {
      out.target_reached = true;
      out.target_sum = e.sum;
      if (std::abs(e.sum - 1.0) > tol) out.offending.push_back(e);
    } else {
      out.max_other = std::max(out.max_other, std::abs(e.sum));
      if (std::abs(e.sum) > tol) out.offending.push_back(e);
    }
  }
  out.pass = out.target_reached && out.offending.empty();
  return out;
}

EqualLengthAggregate aggregate_equal_length(const IntervalUnion& omega, const BoundaryMatrix& b, double x,
                                            double t, unsigned p) {
  if (!omega.equal_lengths(omega.tolerance()))
    throw Error(ErrorCode::NotEqualLength, "aggregation needs intervals of equal length");
  if (p == 0) throw Error(ErrorCode::PreconditionViolated, "p must be at least 1");
  const auto start = omega.locate(x);
  if (!start) throw Error(ErrorCode::XNotInOmega, "x = " + std::to_string(x) + " is not in omega");
  const double ell = omega.length(0);
  const double tau = t - (omega.beta(*start) - x);
  if (!(tau > (p - 1) * ell && tau < p * ell)) {
    std::ostringstream os;
    os << "t - (beta_i - x) = " << tau << " is not inside ((p-1) l, p l) for p = " << p;
    throw Error(ErrorCode::PreconditionViolated, os.str());
  }
  const auto set = enumerate_paths(omega, b, x, t);
  EqualLengthAggregate out;
  out.row = *start;
  out.p = p;
  out.common_remainder = tau - (p - 1) * ell;
  const auto n = static_cast<Eigen::Index>(omega.size());
  out.from_paths = CVector::Zero(n);
  for (const auto& path : set.paths) {
    if (path.word.size() != p + 1)
      throw Error(ErrorCode::PreconditionViolated, "path of unexpected length in equal-length aggregation");
    out.from_paths(static_cast<Eigen::Index>(path.word.back())) += path.weight;
  }
  out.from_power = power(b, p).matrix().row(static_cast<Eigen::Index>(*start)).transpose();
  out.max_difference = (out.from_paths - out.from_power).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace spi
