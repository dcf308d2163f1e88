#include "steklov/mobius.hpp"

#include <cmath>
#include <stdexcept>

#include "steklov/spectrum.hpp"
#include "steklov/util.hpp"

namespace steklov {

Density mobius_density(const MobiusParams& params, const BoundaryGrid& grid) {
  const double r = params.a_modulus;
  if (!(r >= 0.0 && r < 1.0)) {
    throw std::invalid_argument("mobius_density: requires 0 <= a_modulus < 1");
  }
  if (grid.parametrization_id != "unit_disk") {
    throw std::invalid_argument("mobius_density: grid must be a unit-disk grid");
  }
  const int L = grid.size();
  Density d;
  d.values.resize(L);
  const double num = 1.0 - r * r;
  for (int l = 0; l < L; ++l) {
    const double theta = grid.params[l];
    d.values[l] = num / (1.0 - 2.0 * r * std::cos(theta - params.a_phase) + r * r);
  }
  d.alpha = d.values.minCoeff();
  d.beta = d.values.maxCoeff();
  d.gamma = d.values.sum() * grid.ds;
  d.grid_fingerprint = grid.fingerprint();
  return d;
}

Density mobius_density_clipped(const MobiusParams& params, const BoundaryGrid& grid, double alpha,
                               double beta, double gamma) {
  const Density raw = mobius_density(params, grid);
  return project_to_admissible(raw.values, alpha, beta, gamma, grid);
}

MobiusReport validate_mobius_maximizer(const MobiusParams& params, const BasisMatrices& basis,
                                       const BoundaryGrid& grid, double cluster_tol) {
  const Density rho = mobius_density(params, grid);
  const int n_eigs = std::min(6, 2 * basis.k0 + 1);
  const Spectrum sp = solve_spectrum(basis, grid, rho, n_eigs);

  MobiusReport rep;
  rep.lambda1 = sp.eigenvalues[1];
  rep.lambda2 = sp.eigenvalues.size() > 2 ? sp.eigenvalues[2] : 0.0;
  rep.lambda1_gamma = rep.lambda1 * kTwoPi;
  rep.deviation_from_2pi = std::abs(rep.lambda1_gamma - kTwoPi);
  const auto [lo, hi] = eigenvalue_cluster(sp.eigenvalues, 1, cluster_tol);
  rep.multiplicity = hi - lo + 1;
  return rep;
}

}  // namespace steklov
