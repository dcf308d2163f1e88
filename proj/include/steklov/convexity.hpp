#ifndef STEKLOV_CONVEXITY_HPP
#define STEKLOV_CONVEXITY_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "steklov/boundary_grid.hpp"
#include "steklov/density.hpp"
#include "steklov/harmonic_basis.hpp"

namespace steklov {

/// Second-difference verdict for a curve sampled on a uniform grid. A flat
/// curve is both concave and convex.
struct CurveClassification {
  bool concave = false;
  bool convex = false;
  std::string label() const;
};

/// Classifies y(t) on a uniform grid: concave when every interior second
/// difference is <= tol_curv, convex when every one is >= -tol_curv.
/// tol_curv < 0 selects the default 1e-8 * max(1, max|y|). Requires at
/// least 3 samples.
CurveClassification classify_curve(const Eigen::VectorXd& y, double tol_curv = -1.0);

/// lambda_k along the segment rho_t = t*rho_a + (1-t)*rho_b, with per-curve
/// classification of lambda_k(t) and 1/lambda_k(t).
struct ConvexityProbeResult {
  Eigen::VectorXd t_values;
  std::vector<int> k_list;
  Eigen::MatrixXd lambdas;      ///< n_t x |k_list|
  Eigen::MatrixXd inv_lambdas;  ///< elementwise reciprocal
  std::vector<CurveClassification> lambda_class;
  std::vector<CurveClassification> inv_lambda_class;
};

/// Samples a uniform t grid on [0, 1] (n_t >= 5) and solves the spectrum at
/// each combination. Both densities must live on `grid` and be strictly
/// positive; boxes may differ (only the nodal values enter). `workers`
/// parallelizes over t; results are ordered by t index regardless.
ConvexityProbeResult convexity_probe(const BasisMatrices& basis, const BoundaryGrid& grid,
                                     const Density& rho_a, const Density& rho_b,
                                     const std::vector<int>& k_list, int n_t,
                                     double tol_curv = -1.0, int workers = 1);

}  // namespace steklov

#endif
