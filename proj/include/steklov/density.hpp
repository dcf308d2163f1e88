#ifndef STEKLOV_DENSITY_HPP
#define STEKLOV_DENSITY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "steklov/boundary_grid.hpp"

namespace steklov {

/// Nodal boundary density together with the admissible-set parameters:
/// box bounds alpha <= rho <= beta and total mass gamma = sum rho ds.
struct Density {
  Eigen::VectorXd values;  ///< rho(p_l), one entry per grid node
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::uint64_t grid_fingerprint = 0;

  int size() const { return static_cast<int>(values.size()); }
  double mass(const BoundaryGrid& grid) const { return values.sum() * grid.ds; }
  std::uint64_t fingerprint() const;
};

/// True when the box bounds hold to `box_tol` and the mass matches gamma to
/// relative tolerance `mass_rel_tol`.
bool is_admissible(const Density& density, const BoundaryGrid& grid, double box_tol = 1e-12,
                   double mass_rel_tol = 1e-10);

/// Budget of boundary measure carrying the high density beta:
/// A = (gamma - alpha |dOmega|) / (beta - alpha).
double high_density_budget(double alpha, double beta, double gamma, double total_length);

/// Euclidean projection of `raw` onto the admissible set: clip(raw + c) with
/// the scalar shift c found by monotone bisection so the mass equals gamma to
/// relative 1e-12. Idempotent on admissible inputs. Throws
/// std::invalid_argument when alpha*|dOmega| < gamma < beta*|dOmega| fails.
Density project_to_admissible(const Eigen::VectorXd& raw, double alpha, double beta, double gamma,
                              const BoundaryGrid& grid);

/// Bang-bang density: beta on the union of the angle intervals
/// [start, end) (interpreted modulo 2*pi), alpha elsewhere. The recorded
/// gamma is the achieved nodal mass. Throws std::invalid_argument for
/// overlapping arcs or degenerate intervals.
Density make_bang_bang(const std::vector<std::pair<double, double>>& arcs, double alpha,
                       double beta, const BoundaryGrid& grid);

/// Number of maximal cyclic runs of nodes with rho > (alpha+beta)/2.
int count_arcs(const Density& density);

}  // namespace steklov

#endif
