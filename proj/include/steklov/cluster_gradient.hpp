#ifndef STEKLOV_CLUSTER_GRADIENT_HPP
#define STEKLOV_CLUSTER_GRADIENT_HPP

#include <Eigen/Core>

#include "steklov/density.hpp"
#include "steklov/spectrum.hpp"

namespace steklov {

/// Derivative data for the cluster sum Lambda_{k,l} = sum_{j=0}^{l}
/// lambda_{k+j}: the boundary function w = sum_j u_{k+j}^2 and the factor
/// scale = -lambda_k, so that the directional derivative along a density
/// perturbation h is scale * sum h w ds.
struct ClusterGradient {
  Eigen::VectorXd w;       ///< nodal sum of squared traces over the cluster
  double scale = 0.0;      ///< -lambda_k
  int k = 0;               ///< first index of the multiplicity cluster
  int l = 0;               ///< cluster covers indices k..k+l
  int cluster_width = 0;   ///< l + 1
};

/// Builds the gradient for the full multiplicity cluster containing
/// eigenvalue index k (eigenvalues within cluster_tol relative gap are
/// grouped; the reported k is the first index of that group). The spectrum
/// must have been computed for `density` — fingerprints are checked — and
/// k must satisfy 1 <= k < spectrum.size().
ClusterGradient cluster_gradient(const Spectrum& spectrum, const Density& density, int k,
                                 double cluster_tol = 1e-6);

/// scale * sum h w ds — the Gateaux derivative of the cluster sum along h.
double directional_derivative(const ClusterGradient& grad, const Eigen::VectorXd& h, double ds);

}  // namespace steklov

#endif
