#include "spi/exp_poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spi/error.hpp"

namespace spi {

cplx ExpAtom::operator()(double x) const {
  cplx acc{0.0, 0.0};
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc * turn(frequency * x);
}

std::vector<cplx> shift_polynomial(std::span<const cplx> p, double shift) {
  // q_k = sum_{m >= k} C(m, k) shift^(m-k) p_m, evaluated as repeated synthetic division
  std::vector<cplx> q(p.begin(), p.end());
  if (shift == 0.0) return q;
  const std::size_t n = q.size();
  for (std::size_t k = 0; k + 1 < n; ++k)
    for (std::size_t m = n - 1; m > k; --m) q[m - 1] += shift * q[m];
  return q;
}

ExpAtom shifted(const ExpAtom& atom, double shift) {
  ExpAtom out;
  out.frequency = atom.frequency;
  out.poly = shift_polynomial(atom.poly, shift);
  const cplx phase = turn(atom.frequency * shift);
  for (auto& c : out.poly) c *= phase;
  return out;
}

std::vector<ExpAtom> combine_atoms(std::vector<ExpAtom> atoms) {
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const ExpAtom& a, const ExpAtom& b) { return a.frequency < b.frequency; });
  std::vector<ExpAtom> out;
  for (auto& a : atoms) {
    if (!out.empty() && out.back().frequency == a.frequency) {
      auto& poly = out.back().poly;
      if (poly.size() < a.poly.size()) poly.resize(a.poly.size(), cplx{0.0, 0.0});
      for (std::size_t k = 0; k < a.poly.size(); ++k) poly[k] += a.poly[k];
    } else {
      out.push_back(std::move(a));
    }
  }
  std::erase_if(out, [](const ExpAtom& a) {
    return std::all_of(a.poly.begin(), a.poly.end(), [](cplx c) { return c == cplx{0.0, 0.0}; });
  });
  for (auto& a : out)
    while (a.poly.size() > 1 && a.poly.back() == cplx{0.0, 0.0}) a.poly.pop_back();
  return out;
}

cplx Piece::operator()(double x) const {
  cplx acc{0.0, 0.0};
  for (const auto& a : atoms) acc += a(x);
  return acc;
}

namespace {

void check_degrees(const std::vector<ExpAtom>& atoms, std::size_t max_degree) {
  for (const auto& a : atoms) {
    if (a.poly.size() > max_degree + 1) {
      std::ostringstream os;
      os << "polynomial degree " << a.degree() << " exceeds the maximum " << max_degree;
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
    if (!std::isfinite(a.frequency)) throw Error(ErrorCode::NonFinite, "non-finite atom frequency");
  }
}

std::vector<double> merged_breaks(std::vector<double> a, const std::vector<double>& b, double scale) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  const double eps = 1e-12 * scale;
  std::vector<double> out;
  for (double x : a)
    if (out.empty() || x - out.back() > eps) out.push_back(x);
  // keep the exact interval endpoints
  out.front() = a.front();
  out.back() = a.back();
  return out;
}

void require_same_domain(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
  if (!(f.domain() == g.domain())) throw Error(ErrorCode::InvalidArgument, "functions live on different sets");
}

double scale_of(const IntervalUnion& omega) {
  return std::max({1.0, std::abs(omega.alpha(0)), std::abs(omega.beta(omega.size() - 1))});
}

// J_k(z) = int_0^1 v^k e^{z v} dv for k = 0..kmax. Upward recurrence is stable
// for k <= |z|, downward for k > |z|.
std::vector<cplx> unit_moments(cplx z, std::size_t kmax) {
  std::vector<cplx> j(kmax + 1);
  const double r = std::abs(z);
  const cplx ez = std::exp(z);
  const auto m = static_cast<std::size_t>(std::floor(r));
  std::size_t up_to = 0;  // number of entries filled by the upward pass
  if (m >= 1) {
    j[0] = (ez - 1.0) / z;
    up_to = 1;
    for (std::size_t k = 1; k <= std::min(m, kmax); ++k, ++up_to)
      j[k] = (ez - static_cast<double>(k) * j[k - 1]) / z;
  }
  if (up_to <= kmax) {
    const std::size_t start = kmax + 60;
    cplx next = ez / static_cast<double>(start + 2);
    for (std::size_t k = start + 1; k-- > up_to;) {
      const cplx cur = (ez - z * next) / static_cast<double>(k + 1);
      if (k <= kmax) j[k] = cur;
      next = cur;
    }
  }
  return j;
}

std::vector<cplx> conj_poly(std::vector<cplx> p) {
  for (auto& c : p) c = std::conj(c);
  return p;
}

std::vector<cplx> multiply(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cplx> out(a.size() + b.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i + k] += a[i] * b[k];
  return out;
}

// int_a^{a+h} r(x - a) e^{2 pi i s x} dx for a polynomial r in the local coordinate
cplx local_integral(const std::vector<cplx>& r, double a, double h, double s) {
  if (r.empty()) return {0.0, 0.0};
  const auto j = unit_moments(cplx{0.0, kTwoPi * s * h}, r.size() - 1);
  cplx acc{0.0, 0.0};
  double hp = h;
  for (std::size_t k = 0; k < r.size(); ++k, hp *= h) acc += r[k] * hp * j[k];
  return acc * turn(s * a);
}

const Piece& locate_piece(std::span<const Piece> pieces, double x) {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), x, [](double v, const Piece& p) { return v < p.lo; });
  if (it == pieces.begin()) return pieces.front();
  return *std::prev(it);
}

}  // namespace

PiecewiseExpPoly PiecewiseExpPoly::from_atoms(IntervalUnion omega, std::vector<std::vector<ExpAtom>> per_interval,
                                              std::size_t max_degree) {
  if (per_interval.size() != omega.size())
    throw Error(ErrorCode::InvalidArgument, "one atom list per interval is required");
  std::vector<std::vector<Piece>> pieces(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i) {
    check_degrees(per_interval[i], max_degree);
    pieces[i].push_back({omega.alpha(i), omega.beta(i), combine_atoms(std::move(per_interval[i]))});
  }
  return PiecewiseExpPoly(std::move(omega), std::move(pieces));
}

PiecewiseExpPoly PiecewiseExpPoly::from_pieces(IntervalUnion omega, std::vector<std::vector<Piece>> pieces,
                                               std::size_t max_degree) {
  if (pieces.size() != omega.size())
    throw Error(ErrorCode::InvalidArgument, "one piece list per interval is required");
  const double tol = omega.tolerance();
  for (std::size_t i = 0; i < omega.size(); ++i) {
    auto& list = pieces[i];
    if (list.empty()) throw Error(ErrorCode::InvalidArgument, "interval without pieces");
    if (std::abs(list.front().lo - omega.alpha(i)) > tol || std::abs(list.back().hi - omega.beta(i)) > tol)
      throw Error(ErrorCode::InvalidArgument, "pieces do not cover the interval");
    list.front().lo = omega.alpha(i);
    list.back().hi = omega.beta(i);
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (!(list[k].hi > list[k].lo)) throw Error(ErrorCode::InvalidArgument, "empty piece");
      if (k > 0 && std::abs(list[k].lo - list[k - 1].hi) > tol)
        throw Error(ErrorCode::InvalidArgument, "pieces are not contiguous");
      if (k > 0) list[k].lo = list[k - 1].hi;
      check_degrees(list[k].atoms, max_degree);
      list[k].atoms = combine_atoms(std::move(list[k].atoms));
    }
  }
  return PiecewiseExpPoly(std::move(omega), std::move(pieces));
}

PiecewiseExpPoly PiecewiseExpPoly::zero(IntervalUnion omega) {
  std::vector<std::vector<ExpAtom>> atoms(omega.size());
  return from_atoms(std::move(omega), std::move(atoms));
}

PiecewiseExpPoly PiecewiseExpPoly::eigenfunction(IntervalUnion omega, double lambda, const CVector& c) {
  if (static_cast<std::size_t>(c.size()) != omega.size())
    throw Error(ErrorCode::InvalidArgument, "coefficient vector size does not match the interval count");
  std::vector<std::vector<ExpAtom>> atoms(omega.size());
  for (std::size_t i = 0; i < omega.size(); ++i)
    atoms[i].push_back({lambda, {c(static_cast<Eigen::Index>(i))}});
  return from_atoms(std::move(omega), std::move(atoms));
}

std::size_t PiecewiseExpPoly::piece_count() const {
  std::size_t n = 0;
  for (const auto& list : pieces_) n += list.size();
  return n;
}

const Piece& PiecewiseExpPoly::piece_at(std::size_t interval, double x) const {
  return locate_piece(pieces_[interval], x);
}

cplx PiecewiseExpPoly::operator()(double x) const {
  const auto i = omega_.locate(x);
  if (!i) return {0.0, 0.0};
  return piece_at(*i, x)(x);
}

CVector PiecewiseExpPoly::alpha_values() const {
  CVector v(static_cast<Eigen::Index>(omega_.size()));
  for (std::size_t i = 0; i < omega_.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = pieces_[i].front()(omega_.alpha(i));
  return v;
}

CVector PiecewiseExpPoly::beta_values() const {
  CVector v(static_cast<Eigen::Index>(omega_.size()));
  for (std::size_t i = 0; i < omega_.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = pieces_[i].back()(omega_.beta(i));
  return v;
}

PiecewiseExpPoly PiecewiseExpPoly::scaled(cplx factor) const {
  auto pieces = pieces_;
  for (auto& list : pieces)
    for (auto& piece : list) {
      for (auto& atom : piece.atoms)
        for (auto& c : atom.poly) c *= factor;
      piece.atoms = combine_atoms(std::move(piece.atoms));
    }
  return PiecewiseExpPoly(omega_, std::move(pieces));
}

PiecewiseExpPoly PiecewiseExpPoly::operator+(const PiecewiseExpPoly& other) const {
  require_same_domain(*this, other);
  const double scale = scale_of(omega_);
  std::vector<std::vector<Piece>> pieces(omega_.size());
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    const auto br = merged_breaks(breakpoints(i), other.breakpoints(i), scale);
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
      const double mid = 0.5 * (br[k] + br[k + 1]);
      auto atoms = piece_at(i, mid).atoms;
      const auto& more = other.piece_at(i, mid).atoms;
      atoms.insert(atoms.end(), more.begin(), more.end());
      pieces[i].push_back({br[k], br[k + 1], combine_atoms(std::move(atoms))});
    }
  }
  return PiecewiseExpPoly(omega_, std::move(pieces));
}

PiecewiseExpPoly PiecewiseExpPoly::reflected() const {
  const std::size_t n = omega_.size();
  std::vector<std::vector<Piece>> pieces(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& target = pieces[n - 1 - i];
    for (auto it = pieces_[i].rbegin(); it != pieces_[i].rend(); ++it) {
      Piece p;
      p.lo = -it->hi;
      p.hi = -it->lo;
      for (const auto& a : it->atoms) {
        ExpAtom r{-a.frequency, a.poly};
        for (std::size_t k = 1; k < r.poly.size(); k += 2) r.poly[k] = -r.poly[k];
        p.atoms.push_back(std::move(r));
      }
      p.atoms = combine_atoms(std::move(p.atoms));
      target.push_back(std::move(p));
    }
  }
  return PiecewiseExpPoly(reflect(omega_), std::move(pieces));
}

std::vector<double> PiecewiseExpPoly::breakpoints(std::size_t interval) const {
  std::vector<double> out;
  for (const auto& p : pieces_[interval]) out.push_back(p.lo);
  out.push_back(pieces_[interval].back().hi);
  return out;
}

cplx inner_product(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g) {
  require_same_domain(f, g);
  const auto& omega = f.domain();
  const double scale = scale_of(omega);
  cplx total{0.0, 0.0};
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const auto br = merged_breaks(f.breakpoints(i), g.breakpoints(i), scale);
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
      const double a = br[k];
      const double h = br[k + 1] - a;
      const double mid = a + 0.5 * h;
      const auto& fa = locate_piece(f.pieces(i), mid).atoms;
      const auto& ga = locate_piece(g.pieces(i), mid).atoms;
      for (const auto& p : fa) {
        const auto pl = shift_polynomial(p.poly, a);
        for (const auto& q : ga) {
          const auto ql = conj_poly(shift_polynomial(q.poly, a));
          total += local_integral(multiply(pl, ql), a, h, p.frequency - q.frequency);
        }
      }
    }
  }
  return total;
}

double norm(const PiecewiseExpPoly& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

std::vector<cplx> exp_moments(double a, double b, double s, std::size_t max_k) {
  std::vector<cplx> out(max_k + 1);
  const double h = b - a;
  for (std::size_t k = 0; k <= max_k; ++k) {
    std::vector<cplx> mono(k + 1, cplx{0.0, 0.0});
    mono[k] = 1.0;
    out[k] = local_integral(shift_polynomial(mono, a), a, h, s);
  }
  return out;
}

std::vector<double> probe_points(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, std::size_t per_piece) {
  require_same_domain(f, g);
  const auto& omega = f.domain();
  const double scale = scale_of(omega);
  std::vector<double> out;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const auto br = merged_breaks(f.breakpoints(i), g.breakpoints(i), scale);
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
      const double step = (br[k + 1] - br[k]) / static_cast<double>(per_piece);
      for (std::size_t m = 0; m < per_piece; ++m) out.push_back(br[k] + (static_cast<double>(m) + 0.5) * step);
    }
  }
  return out;
}

std::vector<double> probe_points(const PiecewiseExpPoly& f, std::size_t per_piece) {
  return probe_points(f, f, per_piece);
}

double max_abs_difference(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, std::size_t per_piece) {
  double worst = 0.0;
  for (double x : probe_points(f, g, per_piece)) worst = std::max(worst, std::abs(f(x) - g(x)));
  return worst;
}

}  // namespace spi
