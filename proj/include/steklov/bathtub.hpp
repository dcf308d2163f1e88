#ifndef STEKLOV_BATHTUB_HPP
#define STEKLOV_BATHTUB_HPP

#include <vector>

#include <Eigen/Core>

#include "steklov/boundary_grid.hpp"
#include "steklov/density.hpp"

namespace steklov {

enum class Direction { Minimize, Maximize };

/// Result of extremizing the linear functional rho -> sum rho f ds over the
/// admissible set: a bang-bang density (at most one fractional node), the
/// threshold tau, and the partition of nodes by f relative to tau.
struct BathtubSolution {
  Density density;
  double tau = 0.0;
  std::vector<int> below_set;  ///< f < tau - band
  std::vector<int> level_set;  ///< |f - tau| <= band
  std::vector<int> above_set;  ///< f > tau + band
  double objective = 0.0;      ///< sum rho f ds at the optimum
};

/// Exact discrete solution of min/max of sum rho f ds over the box-plus-mass
/// set: sort nodes by f (ascending for Minimize, descending for Maximize,
/// ties broken by grid index), fill rho = beta until the high-density budget
/// A = (gamma - alpha|dOmega|)/(beta - alpha) is spent, with a single
/// fractional node if A/ds is not an integer. tau is f at the last filled
/// node. Throws std::invalid_argument for an infeasible triple.
BathtubSolution bathtub_extremize(const Eigen::VectorXd& f, const BoundaryGrid& grid, double alpha,
                                  double beta, double gamma, Direction direction);

/// Post-hoc check of the threshold case rule at a candidate extremizer.
struct OptimalityReport {
  double violation_measure = 0.0;  ///< ds-measure of nodes breaking the rule
  double tau = 0.0;
  double band = 0.0;  ///< half-width of the |w - tau| level-set band used
  int n_violating = 0;
};

/// Checks the first-order optimality rule against the cluster gradient
/// density w = sum_j u_{k+j}^2. For Minimize the rule is rho = alpha where
/// w < tau and rho = beta where w > tau with tau = sup{s : |{w >= s}| >= A};
/// for Maximize it is rho = beta where w < tau and rho = alpha where w > tau
/// with tau = inf{s : |{w <= s}| >= A}. Nodes with |w - tau| <= tol_level are
/// exempt (free on the level set). tol_level < 0 selects the default
/// 1e-3 * range(w).
OptimalityReport verify_optimality(const Density& density, const Eigen::VectorXd& w,
                                   const BoundaryGrid& grid, Direction direction,
                                   double tol_level = -1.0);

}  // namespace steklov

#endif
