#ifndef STEKLOV_OPTIMIZER_HPP
#define STEKLOV_OPTIMIZER_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "steklov/bathtub.hpp"
#include "steklov/boundary_grid.hpp"
#include "steklov/cluster_gradient.hpp"
#include "steklov/density.hpp"
#include "steklov/harmonic_basis.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

enum class InitKind { Constant, Random, BangBang, Values };

/// Settings for min/max of lambda_k(rho)*gamma over the admissible set.
struct OptimizationConfig {
  int k = 1;
  Direction direction = Direction::Minimize;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  int j_guard = 5;          ///< guarded modes above k for maximization
  int max_iters = 300;
  double step0 = 1.0;       ///< initial gradient step
  double step_shrink = 0.5; ///< backtracking factor
  double step_grow = 1.6;   ///< growth factor after an accepted step
  int max_backtracks = 25;
  double tol_obj = 1e-10;   ///< relative per-iteration improvement floor
  int stall_iters = 3;      ///< consecutive sub-tol_obj steps before stopping
  double tol_opt = 1e-3;    ///< optimality threshold as a fraction of |dOmega|
  double cluster_tol = 1e-6;
  int bathtub_every = 1;    ///< try the bathtub fixed-point candidate every N iterations

  InitKind init = InitKind::Constant;
  std::vector<std::pair<double, double>> init_arcs;  ///< for InitKind::BangBang
  Eigen::VectorXd init_values;                       ///< for InitKind::Values
  int restarts = 1;          ///< independent starts (vary only the random init)
  std::uint64_t seed = 12345;
};

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;  ///< lambda_k * gamma at the start of the iteration
  double step = 0.0;
  double violation_measure = 0.0;
};

struct OptimizationResult {
  Density density;
  double objective = 0.0;  ///< lambda_k * gamma, from a fresh solve on `density`
  double lambda_k = 0.0;
  std::vector<IterationRecord> iterates;
  int multiplicity_at_opt = 0;
  std::string termination_reason;  ///< optimality | objective_stall | max_iters |
                                   ///< singleton_feasible_set | resolution_limited
  Spectrum final_spectrum;
  OptimalityReport final_optimality;
  int restart_index = 0;  ///< which restart produced the returned density
};

/// Minimizes lambda_k(rho)*gamma (min t subject to t >= lambda_i, i <= k).
/// Each iteration tries, in order: the bathtub fixed-point map on the active
/// cluster density w, a projected gradient step with backtracking, and - when
/// the active cluster is degenerate - a minimax direction that balances all
/// coupled modes (Frank-Wolfe on the extremal eigenvalue of the cluster
/// perturbation matrix, with bathtub subproblems). Steps are accepted only
/// when a fresh eigensolve improves the true objective.
OptimizationResult minimize_lambda_k(const BasisMatrices& basis, const BoundaryGrid& grid,
                                     const OptimizationConfig& config);

/// Maximizes lambda_k(rho)*gamma guarding modes k..k+j_guard-1 (max t with
/// t <= lambda_i): the active cluster extends upward from k while gaps stay
/// small, capped by j_guard. Same candidate ladder as minimization.
/// Maximization runs for k >= 2 additionally get a resolution check (min
/// high-density arc width >= 4 ds), failing which the termination reason
/// becomes "resolution_limited".
OptimizationResult maximize_lambda_k(const BasisMatrices& basis, const BoundaryGrid& grid,
                                     const OptimizationConfig& config);

}  // namespace steklov

#endif
