#include "steklov/convexity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steklov/spectrum.hpp"
#include "steklov/util.hpp"

namespace steklov {

std::string CurveClassification::label() const {
  if (concave && convex) return "concave_and_convex";
  if (concave) return "concave";
  if (convex) return "convex";
  return "neither";
}

CurveClassification classify_curve(const Eigen::VectorXd& y, double tol_curv) {
  const int n = static_cast<int>(y.size());
  if (n < 3) throw std::invalid_argument("classify_curve: need at least 3 samples");
  const double tol = tol_curv < 0.0 ? 1e-8 * std::max(1.0, y.cwiseAbs().maxCoeff()) : tol_curv;
  CurveClassification c;
  c.concave = true;
  c.convex = true;
  for (int i = 1; i + 1 < n; ++i) {
    const double d2 = y[i + 1] - 2.0 * y[i] + y[i - 1];
    if (d2 > tol) c.concave = false;
    if (d2 < -tol) c.convex = false;
  }
  return c;
}

ConvexityProbeResult convexity_probe(const BasisMatrices& basis, const BoundaryGrid& grid,
                                     const Density& rho_a, const Density& rho_b,
                                     const std::vector<int>& k_list, int n_t, double tol_curv,
                                     int workers) {
  if (n_t < 5) throw std::invalid_argument("convexity_probe: n_t must be >= 5");
  if (rho_a.size() != grid.size() || rho_b.size() != grid.size()) {
    throw std::invalid_argument("convexity_probe: density sizes do not match the grid");
  }
  if (k_list.empty()) throw std::invalid_argument("convexity_probe: empty k_list");
  int k_max = 0;
  for (int k : k_list) {
    if (k < 1) throw std::invalid_argument("convexity_probe: k indices must be >= 1");
    k_max = std::max(k_max, k);
  }
  const int n_eigs = k_max + 1;
  if (n_eigs > 2 * basis.k0 + 1) {
    throw std::invalid_argument("convexity_probe: k exceeds the basis size");
  }

  ConvexityProbeResult res;
  res.k_list = k_list;
  res.t_values.resize(n_t);
  res.lambdas.resize(n_t, static_cast<int>(k_list.size()));

  parallel_for(n_t, workers, [&](int i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_t - 1);
    res.t_values[i] = t;
    Density mix;
    mix.values = t * rho_a.values + (1.0 - t) * rho_b.values;
    mix.alpha = mix.values.minCoeff();
    mix.beta = mix.values.maxCoeff();
    mix.gamma = mix.values.sum() * grid.ds;
    mix.grid_fingerprint = grid.fingerprint();
    const Spectrum sp = solve_spectrum(basis, grid, mix, n_eigs);
    for (std::size_t j = 0; j < k_list.size(); ++j) {
      res.lambdas(i, static_cast<int>(j)) = sp.eigenvalues[k_list[j]];
    }
  });

  res.inv_lambdas = res.lambdas.cwiseInverse();
  for (int j = 0; j < res.lambdas.cols(); ++j) {
    res.lambda_class.push_back(classify_curve(res.lambdas.col(j), tol_curv));
    res.inv_lambda_class.push_back(classify_curve(res.inv_lambdas.col(j), tol_curv));
  }
  return res;
}

}  // namespace steklov
