#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "spi/boundary_matrix.hpp"
#include "spi/interval_union.hpp"

namespace spi {

/// p(x) e^{2 pi i frequency x}; `poly` holds ascending coefficients in the
/// global coordinate x.
struct ExpAtom {
  double frequency = 0.0;
  std::vector<cplx> poly;

  cplx operator()(double x) const;
  std::size_t degree() const { return poly.empty() ? 0 : poly.size() - 1; }
};

/// x -> atom(x + shift), again an atom of the same frequency.
ExpAtom shifted(const ExpAtom& atom, double shift);

/// Coefficients of p(x + shift).
std::vector<cplx> shift_polynomial(std::span<const cplx> p, double shift);

/// Sums atoms of identical frequency and drops zero polynomials.
std::vector<ExpAtom> combine_atoms(std::vector<ExpAtom> atoms);

struct Piece {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<ExpAtom> atoms;

  cplx operator()(double x) const;
};

/// A function on omega that is a finite exponential polynomial on each of
/// finitely many sub-pieces of every interval. Values at interior breakpoints
/// are taken from the right-hand piece; endpoint values are one-sided limits.
class PiecewiseExpPoly {
 public:
  static constexpr std::size_t kDefaultMaxDegree = 8;

  /// One piece per interval. Throws InvalidArgument when the outer size does
  /// not match or a polynomial exceeds max_degree.
  static PiecewiseExpPoly from_atoms(IntervalUnion omega, std::vector<std::vector<ExpAtom>> per_interval,
                                     std::size_t max_degree = kDefaultMaxDegree);
  /// Pieces must be ordered and cover each interval exactly.
  static PiecewiseExpPoly from_pieces(IntervalUnion omega, std::vector<std::vector<Piece>> pieces,
                                      std::size_t max_degree = kDefaultMaxDegree);
  static PiecewiseExpPoly zero(IntervalUnion omega);

  /// The eigenfunction e^{2 pi i lambda x} sum_i c_i chi_i.
  static PiecewiseExpPoly eigenfunction(IntervalUnion omega, double lambda, const CVector& c);

  const IntervalUnion& domain() const { return omega_; }
  std::span<const Piece> pieces(std::size_t interval) const { return pieces_[interval]; }
  std::size_t piece_count() const;

  /// Value at x; zero outside omega.
  cplx operator()(double x) const;
  /// Value of the piece of interval i that covers x, closed at both ends.
  cplx value_in(std::size_t interval, double x) const { return piece_at(interval, x)(x); }

  /// f(alpha_i +), f(beta_i -)
  CVector alpha_values() const;
  CVector beta_values() const;

  PiecewiseExpPoly scaled(cplx factor) const;
  PiecewiseExpPoly operator+(const PiecewiseExpPoly& other) const;
  /// J f(x) = f(-x) on -omega.
  PiecewiseExpPoly reflected() const;

  /// Breakpoints of interval i including both endpoints.
  std::vector<double> breakpoints(std::size_t interval) const;

 private:
  PiecewiseExpPoly(IntervalUnion omega, std::vector<std::vector<Piece>> pieces)
      : omega_(std::move(omega)), pieces_(std::move(pieces)) {}

  const Piece& piece_at(std::size_t interval, double x) const;

  IntervalUnion omega_;
  std::vector<std::vector<Piece>> pieces_;
};

/// Closed-form L2(omega) pairing  sum_i int f conj(g).
cplx inner_product(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g);
double norm(const PiecewiseExpPoly& f);

/// int_a^b x^k e^{2 pi i s x} dx for k = 0..max_k, stable for every s.
std::vector<cplx> exp_moments(double a, double b, double s, std::size_t max_k);

/// Sample points: `per_piece` equispaced points inside every piece of the
/// common refinement of f and g, offset by half a step from breakpoints.
std::vector<double> probe_points(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g,
                                 std::size_t per_piece = 64);
std::vector<double> probe_points(const PiecewiseExpPoly& f, std::size_t per_piece = 64);

/// max |f(x) - g(x)| over probe_points(f, g).
double max_abs_difference(const PiecewiseExpPoly& f, const PiecewiseExpPoly& g, std::size_t per_piece = 64);

}  // namespace spi
