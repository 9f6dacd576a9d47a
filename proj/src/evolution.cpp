#include "spi/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

namespace {

struct Arrival {
  std::size_t interval = 0;
  double entry = 0.0;  // elapsed time since leaving the start interval
  cplx weight{0.0, 0.0};
};

// Arrival events for a point leaving interval `start`, ordered by entry time.
// `step(i, j)` is the splitting weight for the transition i -> j.
std::vector<Arrival> arrivals(const IntervalUnion& omega, const CMatrix& step, std::size_t start, double horizon,
                              std::size_t cap, double t) {
  const std::size_t n = omega.size();
  auto later = [](const Arrival& a, const Arrival& b) { return a.entry > b.entry; };
  std::priority_queue<Arrival, std::vector<Arrival>, decltype(later)> queue(later);
  for (std::size_t j = 0; j < n; ++j) {
    const cplx w = step(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(j));
    if (w != cplx{0.0, 0.0}) queue.push({j, 0.0, w});
  }
  const double eps = 1e-12 * std::max(1.0, horizon);
  std::vector<Arrival> out;
  std::vector<cplx> bucket(n);
  std::vector<bool> used(n);
  while (!queue.empty()) {
    const double entry = queue.top().entry;
    std::fill(bucket.begin(), bucket.end(), cplx{0.0, 0.0});
    std::fill(used.begin(), used.end(), false);
    while (!queue.empty() && queue.top().entry - entry <= eps) {
      bucket[queue.top().interval] += queue.top().weight;
      used[queue.top().interval] = true;
      queue.pop();
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j]) continue;
      if (out.size() >= cap) {
        std::ostringstream os;
        os << "more than " << cap << " arrival events for t = " << t << " (a priori path bound "
           << predicted_path_bound(omega, t) << ")";
        throw Error(ErrorCode::GuardExceeded, os.str());
      }
      out.push_back({j, entry, bucket[j]});
      const double next = entry + omega.length(j);
      if (next >= horizon) continue;
      for (std::size_t k = 0; k < n; ++k) {
        const cplx w = bucket[j] * step(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
        if (w != cplx{0.0, 0.0}) queue.push({k, next, w});
      }
    }
  }
  return out;
}

std::vector<double> dedupe(std::vector<double> v, double eps) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > eps) out.push_back(x);
  return out;
}

}  // namespace

EvolutionResult apply_U_paths(const IntervalUnion& omega, const BoundaryMatrix& b, double t,
                              const PiecewiseExpPoly& f, std::size_t cap) {
  if (!(f.domain() == omega)) throw Error(ErrorCode::InvalidArgument, "function is defined on a different set");
  if (b.size() != omega.size())
    throw Error(ErrorCode::InvalidArgument, "boundary matrix size does not match the interval count");
  if (!std::isfinite(t)) throw Error(ErrorCode::NonFinite, "non-finite time");

  const std::size_t n = omega.size();
  EvolutionResult result{f, {}, 0, predicted_path_bound(omega, t)};
  result.refinement.resize(n);
  if (t == 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& p : f.pieces(i)) result.refinement[i].push_back({p.lo, p.hi, {{i, 0.0, {1.0, 0.0}, -1.0}}});
    return result;
  }

  const bool forward = t > 0.0;
  const double d = forward ? 1.0 : -1.0;
  const double horizon = std::abs(t);
  const CMatrix step = forward ? b.matrix() : CMatrix(b.matrix().adjoint());
  const double eps = 1e-12 * std::max({1.0, std::abs(omega.alpha(0)), std::abs(omega.beta(n - 1)), horizon});

  std::vector<std::vector<Piece>> pieces(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double exit = forward ? omega.beta(i) : omega.alpha(i);
    // x(tau) = exit - d (horizon - tau); tau in (horizon - l_i, horizon)
    auto x_of = [&](double tau) { return exit - d * (horizon - tau); };
    const auto events = arrivals(omega, step, i, horizon, cap, t);
    result.event_count += events.size();

    std::vector<double> taus;
    const double tau_lo = horizon - omega.length(i);
    if (tau_lo < 0.0) {
      taus.push_back(0.0);
      for (double bp : f.breakpoints(i)) taus.push_back(d * (bp - exit));
    }
    for (const auto& e : events) {
      const double entry_point = forward ? omega.alpha(e.interval) : omega.beta(e.interval);
      taus.push_back(e.entry);
      taus.push_back(e.entry + omega.length(e.interval));
      for (double bp : f.breakpoints(e.interval)) taus.push_back(d * (bp - entry_point) + e.entry);
    }
    std::vector<double> xs{omega.alpha(i), omega.beta(i)};
    for (double tau : taus) {
      if (tau <= tau_lo || tau >= horizon) continue;
      const double x = x_of(tau);
      if (x > omega.alpha(i) + eps && x < omega.beta(i) - eps) xs.push_back(x);
    }
    xs = dedupe(std::move(xs), eps);
    xs.front() = omega.alpha(i);
    xs.back() = omega.beta(i);

    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
      const double mid = 0.5 * (xs[k] + xs[k + 1]);
      const double tau = horizon - d * (exit - mid);
      SubPiece info{xs[k], xs[k + 1], {}};
      std::vector<ExpAtom> atoms;
      auto add = [&](std::size_t source, double shift, cplx weight, double entry) {
        info.contributions.push_back({source, shift, weight, entry});
        const auto& src = f.pieces(source);
        const double arg = mid + shift;
        auto it = std::upper_bound(src.begin(), src.end(), arg, [](double v, const Piece& p) { return v < p.lo; });
        const Piece& piece = it == src.begin() ? src.front() : *std::prev(it);
        for (const auto& a : piece.atoms) {
          ExpAtom s = shifted(a, shift);
          for (auto& c : s.poly) c *= weight;
          atoms.push_back(std::move(s));
        }
      };
      if (tau < 0.0) {
        add(i, t, {1.0, 0.0}, -1.0);
      } else {
        // events are sorted by entry time; active ones satisfy entry <= tau < entry + l
        const auto last = std::upper_bound(events.begin(), events.end(), tau,
                                           [](double v, const Arrival& a) { return v < a.entry; });
        for (auto it = events.begin(); it != last; ++it) {
          if (tau >= it->entry + omega.length(it->interval)) continue;
          const double entry_point = forward ? omega.alpha(it->interval) : omega.beta(it->interval);
          const double shift = entry_point - d * it->entry - exit + d * horizon;
          add(it->interval, shift, it->weight, it->entry);
        }
      }
      pieces[i].push_back({xs[k], xs[k + 1], combine_atoms(std::move(atoms))});
      result.refinement[i].push_back(std::move(info));
    }
  }
  result.function = PiecewiseExpPoly::from_pieces(omega, std::move(pieces), 64);
  return result;
}

cplx evaluate_U_at(const IntervalUnion& omega, const BoundaryMatrix& b, double t, const PiecewiseExpPoly& f,
                   double x, std::size_t cap) {
  const auto set = enumerate_paths(omega, b, x, t, cap);
  cplx acc{0.0, 0.0};
  for (const auto& p : set.paths) acc += p.weight * f.value_in(p.word.back(), p.end);
  return acc;
}

double boundary_defect(const BoundaryMatrix& b, const PiecewiseExpPoly& f) {
  if (b.size() != f.domain().size())
    throw Error(ErrorCode::InvalidArgument, "boundary matrix size does not match the interval count");
  return (b.matrix() * f.alpha_values() - f.beta_values()).norm();
}

bool boundary_condition_check(const BoundaryMatrix& b, const PiecewiseExpPoly& f, double tol) {
  return boundary_defect(b, f) < tol;
}

PiecewiseExpPoly eigen_combination(const IntervalUnion& omega, const std::vector<EigenTerm>& terms) {
  auto out = PiecewiseExpPoly::zero(omega);
  for (const auto& term : terms)
    out = out + PiecewiseExpPoly::eigenfunction(omega, term.lambda, term.c).scaled(term.amplitude);
  return out;
}

PiecewiseExpPoly apply_U_spectral(const IntervalUnion& omega, const SpectrumReport& spectrum, double t,
                                  const std::vector<EigenTerm>& terms) {
  const double tol = 1e-9 * std::max(1.0, std::max(std::abs(spectrum.window.lo), std::abs(spectrum.window.hi)));
  std::vector<EigenTerm> evolved;
  for (const auto& term : terms) {
    const auto& points = spectrum.points;
    auto it = std::min_element(points.begin(), points.end(), [&](const SpectralPoint& a, const SpectralPoint& b) {
      return std::abs(a.lambda - term.lambda) < std::abs(b.lambda - term.lambda);
    });
    std::ostringstream os;
    if (it == points.end() || std::abs(it->lambda - term.lambda) > tol) {
      os << "lambda = " << term.lambda << " is not in the computed spectrum";
      throw Error(ErrorCode::NotEigenCombination, os.str());
    }
    if (static_cast<std::size_t>(term.c.size()) != omega.size())
      throw Error(ErrorCode::NotEigenCombination, "coefficient vector size does not match the interval count");
    CVector rest = term.c;
    for (const auto& v : it->basis) rest -= v.dot(term.c) * v;
    if (rest.norm() > 1e-8 * std::max(1.0, term.c.norm())) {
      os << "vector at lambda = " << term.lambda << " is outside the eigenspace (residual " << rest.norm() << ")";
      throw Error(ErrorCode::NotEigenCombination, os.str());
    }
    evolved.push_back({term.lambda, term.c, term.amplitude * turn(term.lambda * t)});
  }
  return eigen_combination(omega, evolved);
}

LocalTranslationReport local_translation_test(const IntervalUnion& omega, const BoundaryMatrix& b,
                                              std::size_t trials, double tol, std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "at least one trial is required");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto lengths = omega.lengths();
  std::discrete_distribution<std::size_t> pick(lengths.begin(), lengths.end());
  auto sample = [&] {
    for (;;) {
      const std::size_t i = pick(rng);
      const double x = omega.alpha(i) + unit(rng) * omega.length(i);
      if (omega.locate(x)) return x;
    }
  };

  LocalTranslationReport report;
  report.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    const auto f = random_domain_function(omega, b, rng);
    const double x = sample();
    const double y = sample();
    const double t = y - x;
    const cplx evolved = evaluate_U_at(omega, b, t, f, x);
    const cplx translated = f(x + t);
    const double err = std::abs(evolved - translated);
    report.max_error = std::max(report.max_error, err);
    if (!(err <= tol) && !report.witness) report.witness = TranslationWitness{x, t, evolved, translated};
  }
  report.pass = !report.witness.has_value();
  return report;
}

ReflectionReport reflection_consistency(const IntervalUnion& omega, const BoundaryMatrix& b, double t,
                                        const PiecewiseExpPoly& f, double tol) {
  const auto mirror = reflect(omega);
  const auto lhs = apply_U_paths(mirror, reflected_matrix(b), t, f.reflected()).function;
  const auto rhs = apply_U_paths(omega, b, -t, f).function.reflected();
  ReflectionReport out;
  out.max_error = max_abs_difference(lhs, rhs);
  out.pass = out.max_error < tol;
  return out;
}

}  // namespace spi
