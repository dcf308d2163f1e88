#ifndef STEKLOV_MOBIUS_HPP
#define STEKLOV_MOBIUS_HPP

#include "steklov/boundary_grid.hpp"
#include "steklov/density.hpp"
#include "steklov/harmonic_basis.hpp"

namespace steklov {

/// Parameters of the disk automorphism f(z) = e^{i phi} (z - a)/(1 - conj(a) z)
/// with a = r e^{i eta}, r < 1.
struct MobiusParams {
  double a_modulus = 0.0;  ///< r in [0, 1)
  double a_phase = 0.0;    ///< eta
  double phi = 0.0;        ///< rotation; does not affect |f'|
};

/// Density rho(theta) = |f'(e^{i theta})| = (1-r^2)/(1 - 2r cos(theta-eta) + r^2)
/// on the unit-circle grid. The box fields are set to the raw value range
/// (no clipping) and gamma records the achieved nodal mass, which equals
/// 2*pi up to quadrature error. Throws std::invalid_argument when r >= 1 or
/// the grid is not a unit-disk grid.
Density mobius_density(const MobiusParams& params, const BoundaryGrid& grid);

/// Same family squeezed into a box: clip to [alpha, beta] and restore the
/// mass gamma by projection. Intended as optimizer initialization.
Density mobius_density_clipped(const MobiusParams& params, const BoundaryGrid& grid, double alpha,
                               double beta, double gamma);

struct MobiusReport {
  double lambda1_gamma = 0.0;       ///< lambda_1 * 2*pi
  double deviation_from_2pi = 0.0;  ///< |lambda_1 * 2*pi - 2*pi|
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int multiplicity = 0;  ///< cluster width at index 1 (expected 2)
};

/// Solves the spectrum for the (raw) Mobius density and reports how close
/// lambda_1 * 2*pi comes to the exact maximum 2*pi. `cluster_tol` controls
/// the multiplicity detection; the discretization error grows with r, so
/// larger r needs a looser tolerance.
MobiusReport validate_mobius_maximizer(const MobiusParams& params, const BasisMatrices& basis,
                                       const BoundaryGrid& grid, double cluster_tol = 1e-6);

}  // namespace steklov

#endif
