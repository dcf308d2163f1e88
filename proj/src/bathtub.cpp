#include "steklov/bathtub.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "steklov/util.hpp"

namespace steklov {

namespace {

void check_feasible(double alpha, double beta, double gamma, double perim) {
  if (!(beta > alpha)) throw std::invalid_argument("bathtub: requires beta > alpha");
  const double tol = 1e-12 * std::max(1.0, std::abs(gamma));
  if (gamma < alpha * perim - tol || gamma > beta * perim + tol) {
    throw std::invalid_argument("bathtub: infeasible (alpha, beta, gamma)");
  }
}

// Smallest node count n with ds*n >= A, robust to A/ds being an integer up
// to rounding.
int budget_nodes(double A, double ds, int L) {
  int n = static_cast<int>(std::ceil(A / ds - 1e-9));
  return std::clamp(n, 0, L);
}

}  // namespace

BathtubSolution bathtub_extremize(const Eigen::VectorXd& f, const BoundaryGrid& grid, double alpha,
                                  double beta, double gamma, Direction direction) {
  const int L = grid.size();
  if (static_cast<int>(f.size()) != L) {
    throw std::invalid_argument("bathtub_extremize: f size does not match grid");
  }
  const double ds = grid.ds;
  const double perim = grid.total_length;
  check_feasible(alpha, beta, gamma, perim);

  double A = high_density_budget(alpha, beta, gamma, perim);
  A = std::clamp(A, 0.0, perim);

  // Sort by f with ties broken by grid index (stable sort keeps index order).
  std::vector<int> order(static_cast<std::size_t>(L));
  std::iota(order.begin(), order.end(), 0);
  if (direction == Direction::Minimize) {
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return f[i] < f[j]; });
  } else {
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return f[i] > f[j]; });
  }

  int n_full = static_cast<int>(std::floor(A / ds + 1e-9));
  n_full = std::clamp(n_full, 0, L);

  BathtubSolution sol;
  sol.density.values = Eigen::VectorXd::Constant(L, alpha);
  for (int r = 0; r < n_full; ++r) sol.density.values[order[static_cast<std::size_t>(r)]] = beta;

  // Close the mass exactly with a single fractional node.
  const double base_mass = ds * (beta * n_full + alpha * (L - n_full));
  const double residual = gamma - base_mass;
  int last_filled = n_full - 1;
  if (residual > 0.0 && n_full < L) {
    const int node = order[static_cast<std::size_t>(n_full)];
    sol.density.values[node] = std::clamp(alpha + residual / ds, alpha, beta);
    last_filled = n_full;
  }
  sol.tau = f[order[static_cast<std::size_t>(std::max(last_filled, 0))]];

  sol.density.alpha = alpha;
  sol.density.beta = beta;
  sol.density.gamma = gamma;
  sol.density.grid_fingerprint = grid.fingerprint();
  sol.objective = (sol.density.values.array() * f.array()).sum() * ds;

  const double band = 1e-12 * std::max(1.0, f.cwiseAbs().maxCoeff());
  for (int l = 0; l < L; ++l) {
    if (f[l] < sol.tau - band) {
      sol.below_set.push_back(l);
    } else if (f[l] > sol.tau + band) {
      sol.above_set.push_back(l);
    } else {
      sol.level_set.push_back(l);
    }
  }
  return sol;
}

OptimalityReport verify_optimality(const Density& density, const Eigen::VectorXd& w,
                                   const BoundaryGrid& grid, Direction direction,
                                   double tol_level) {
  const int L = grid.size();
  if (density.size() != L || static_cast<int>(w.size()) != L) {
    throw std::invalid_argument("verify_optimality: size mismatch");
  }
  const double ds = grid.ds;
  const double alpha = density.alpha, beta = density.beta;
  double A = high_density_budget(alpha, beta, density.gamma, grid.total_length);
  A = std::clamp(A, 0.0, grid.total_length);
  const int n_A = budget_nodes(A, ds, L);

  OptimalityReport rep;
  const double w_min = w.minCoeff(), w_max = w.maxCoeff();
  const double range = w_max - w_min;
  rep.band = tol_level < 0.0 ? 1e-3 * range : tol_level;

  // A numerically constant w means every node sits on the level set, where
  // the rule leaves rho free.
  if (range <= 1e-12 * std::max(1.0, std::abs(w_max))) {
    rep.tau = w_max;
    return rep;
  }

  std::vector<double> sorted(w.data(), w.data() + L);
  if (direction == Direction::Minimize) {
    // tau = sup{s : |{w >= s}| >= A}: the n_A-th largest value of w.
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    rep.tau = n_A == 0 ? std::numeric_limits<double>::infinity()
                       : sorted[static_cast<std::size_t>(n_A - 1)];
  } else {
    // tau = inf{s : |{w <= s}| >= A}: the n_A-th smallest value of w.
    std::sort(sorted.begin(), sorted.end());
    rep.tau = n_A == 0 ? -std::numeric_limits<double>::infinity()
                       : sorted[static_cast<std::size_t>(n_A - 1)];
  }

  const double rho_tol = 1e-6 * (beta - alpha);
  for (int l = 0; l < L; ++l) {
    double required;
    if (w[l] < rep.tau - rep.band) {
      required = direction == Direction::Minimize ? alpha : beta;
    } else if (w[l] > rep.tau + rep.band) {
      required = direction == Direction::Minimize ? beta : alpha;
    } else {
      continue;  // level set: any value in [alpha, beta] is allowed
    }
    if (std::abs(density.values[l] - required) > rho_tol) {
      ++rep.n_violating;
      rep.violation_measure += ds;
    }
  }
  return rep;
}

}  // namespace steklov
