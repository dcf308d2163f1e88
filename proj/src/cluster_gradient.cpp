#include "steklov/cluster_gradient.hpp"

#include <stdexcept>

namespace steklov {

ClusterGradient cluster_gradient(const Spectrum& spectrum, const Density& density, int k,
                                 double cluster_tol) {
  if (k < 1) throw std::invalid_argument("cluster_gradient: k must be >= 1");
  if (k >= spectrum.size()) {
    throw std::invalid_argument("cluster_gradient: k exceeds computed modes");
  }
  if (spectrum.density_fingerprint != density.fingerprint()) {
    throw std::invalid_argument("cluster_gradient: spectrum was computed for another density");
  }
  const auto [lo, hi] = eigenvalue_cluster(spectrum.eigenvalues, k, cluster_tol);

  ClusterGradient g;
  g.k = lo;
  g.l = hi - lo;
  g.cluster_width = hi - lo + 1;
  g.scale = -spectrum.eigenvalues[k];
  g.w = Eigen::VectorXd::Zero(spectrum.traces.rows());
  for (int j = lo; j <= hi; ++j) g.w += spectrum.traces.col(j).cwiseAbs2();
  return g;
}

double directional_derivative(const ClusterGradient& grad, const Eigen::VectorXd& h, double ds) {
  if (h.size() != grad.w.size()) {
    throw std::invalid_argument("directional_derivative: size mismatch");
  }
  return grad.scale * grad.w.dot(h) * ds;
}

}  // namespace steklov
