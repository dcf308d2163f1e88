#ifndef STEKLOV_DIRICHLET1D_HPP
#define STEKLOV_DIRICHLET1D_HPP

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "steklov/convexity.hpp"

namespace steklov {

/// Piecewise-constant density on (0,1) for -u'' = mu rho u, u(0)=u(1)=0.
/// values[i] holds on (breakpoints[i-1], breakpoints[i]) with the convention
/// breakpoints[-1] = 0 and breakpoints[size] = 1.
struct PiecewiseDensity1D {
  std::vector<double> breakpoints;  ///< strictly increasing, inside (0,1)
  std::vector<double> values;       ///< one more entry than breakpoints, all > 0
};

/// Validating constructors. Throw std::invalid_argument on bad shapes,
/// non-positive values, or breakpoints outside (0,1).
PiecewiseDensity1D make_piecewise1d(std::vector<double> breakpoints, std::vector<double> values);
PiecewiseDensity1D make_two_piece(double breakpoint, double left_value, double right_value);

/// Matching-condition function whose roots in mu are the eigenvalues. For a
/// two-piece density this is the literal 2x2 determinant of the continuity
/// conditions at the breakpoint, built from u = c1 sin(sqrt(mu rho_L) x) on
/// the left and c2 sin(sqrt(mu rho_R)(1-x)) on the right. For more pieces it
/// is u(1) obtained by propagating (u, u') across the pieces with rotation
/// matrices (same roots, different scaling). Requires mu > 0.
double secular_det(double mu, const PiecewiseDensity1D& density);

/// First n eigenvalues, ascending. Sign changes of the secular function are
/// bracketed on a mu grid with step pi^2/(2 max rho) — half the minimal
/// analytic spacing — and bisected to relative 1e-12. A local minimum of
/// |det| below 1e-10 times the local scale without a sign change is deflated
/// as a touching root (counted once; the Dirichlet spectrum is simple).
/// Throws std::runtime_error if fewer than n roots exist below the scan
/// ceiling after extending it 3 times.
std::vector<double> dirichlet_eigs(const PiecewiseDensity1D& density, int n);

/// mu_k and 1/mu_k along a density path with second-difference verdicts.
struct Dirichlet1DProbe {
  Eigen::VectorXd t_values;
  std::vector<int> k_list;
  Eigen::MatrixXd mus;      ///< n_t x |k_list|, mu_k(rho_t); k is 1-based
  Eigen::MatrixXd inv_mus;  ///< elementwise reciprocal
  std::vector<CurveClassification> mu_class;
  std::vector<CurveClassification> inv_mu_class;
};

/// Uniform t grid on [0,1] with n_t >= 9 samples; classification as in
/// classify_curve. `workers` parallelizes the t sweep deterministically.
Dirichlet1DProbe classify_path_convexity(
    const std::function<PiecewiseDensity1D(double)>& path, const std::vector<int>& k_list,
    int n_t, double tol_curv = -1.0, int workers = 1);

/// Path rho_t: left piece alpha + t(beta-alpha), right piece
/// beta - t(beta-alpha), split at 1/2.
std::function<PiecewiseDensity1D(double)> half_split_path(double alpha, double beta);

/// Path t*rho_3 + (1-t)*rho_4 where rho_3 is beta on (1/4, 3/4) and alpha
/// outside, and rho_4 is the complementary profile.
std::function<PiecewiseDensity1D(double)> quarter_split_path(double alpha, double beta);

}  // namespace steklov

#endif
