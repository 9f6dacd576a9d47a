#pragma once

#include <random>

namespace spi {

template <class Rng>
PiecewiseExpPoly random_domain_function(const IntervalUnion& omega, const BoundaryMatrix& b, Rng& rng,
                                        double max_frequency, std::size_t atoms_per_interval) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> freq(-max_frequency, max_frequency);
  std::uniform_int_distribution<int> degree(0, 2);
  auto normal = [&] { return cplx{gauss(rng), gauss(rng)} / std::sqrt(2.0); };

  const auto n = omega.size();
  std::vector<std::vector<ExpAtom>> atoms(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < atoms_per_interval; ++k) {
      ExpAtom a;
      a.frequency = freq(rng);
      // coefficients in the local coordinate keep the values of order one
      std::vector<cplx> local(static_cast<std::size_t>(degree(rng)) + 1);
      for (auto& c : local) c = normal();
      for (std::size_t m = 1; m < local.size(); ++m)
        local[m] /= std::pow(omega.length(i), static_cast<double>(m));
      a.poly = shift_polynomial(local, -omega.alpha(i));
      atoms[i].push_back(std::move(a));
    }
  }
  auto g = PiecewiseExpPoly::from_atoms(omega, atoms);

  CVector v(static_cast<Eigen::Index>(n));
  for (auto& c : v) c = normal();
  const CVector bv = b.matrix() * v;
  const CVector ga = g.alpha_values();
  const CVector gb = g.beta_values();
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = static_cast<Eigen::Index>(i);
    const cplx lift = v(e) - ga(e);
    const cplx slope = (bv(e) - gb(e) - lift) / omega.length(i);
    atoms[i].push_back({0.0, {lift - slope * omega.alpha(i), slope}});
  }
  return PiecewiseExpPoly::from_atoms(omega, std::move(atoms));
}

}  // namespace spi
