#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "steklov/boundary_grid.hpp"
#include "steklov/cluster_gradient.hpp"
#include "steklov/density.hpp"
#include "steklov/harmonic_basis.hpp"
#include "steklov/spectrum.hpp"
#include "steklov/util.hpp"

using namespace steklov;

namespace {

Density random_density(const BoundaryGrid& grid, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  Density d;
  d.values = Eigen::VectorXd::NullaryExpr(grid.size(), [&](Eigen::Index) { return U(rng); });
  d.alpha = lo;
  d.beta = hi;
  d.gamma = d.values.sum() * grid.ds;
  d.grid_fingerprint = grid.fingerprint();
  return d;
}

// Central finite difference of the cluster sum sum_{j=first..last} lambda_j
// along the density perturbation h, holding the index range fixed.
double fd_cluster_sum(const BasisMatrices& basis, const BoundaryGrid& grid, const Density& rho,
                      const Eigen::VectorXd& h, int first, int last, double eps) {
  auto cluster_sum = [&](double sgn) {
    Density shifted = rho;
    shifted.values += sgn * eps * h;
    shifted.grid_fingerprint = grid.fingerprint();
    const Spectrum sp = solve_spectrum(basis, grid, shifted, last + 3);
    double sum = 0.0;
    for (int j = first; j <= last; ++j) sum += sp.eigenvalues[j];
    return sum;
  };
  return (cluster_sum(1.0) - cluster_sum(-1.0)) / (2.0 * eps);
}

}  // namespace

TEST_CASE("cluster gradient matches central finite differences") {
  const int L = 240, k0 = 12;
  const BoundaryGrid g = make_unit_disk_grid(L);
  const BasisMatrices basis = assemble_basis(g, k0);
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> H(-1.0, 1.0);

  int pairs_checked = 0;
  for (int k : {1, 3, 5}) {
    for (int trial = 0; trial < 8; ++trial) {
      const Density rho = random_density(g, rng, 0.6, 1.8);
      const Spectrum sp = solve_spectrum(basis, g, rho, k + 4);
      const ClusterGradient grad = cluster_gradient(sp, rho, k);
      const Eigen::VectorXd h =
          Eigen::VectorXd::NullaryExpr(L, [&](Eigen::Index) { return H(rng); });

      const double analytic = directional_derivative(grad, h, g.ds);
      const double fd =
          fd_cluster_sum(basis, g, rho, h, grad.k, grad.k + grad.l, 1e-6);
      const double scale = std::max({1.0, std::abs(analytic), std::abs(fd)});
      CHECK(std::abs(analytic - fd) / scale < 1e-4);
      ++pairs_checked;
    }
  }
  CHECK(pairs_checked >= 20);
}

TEST_CASE("cluster gradient handles a degenerate pair as one unit") {
  // Uniform density on the disk: lambda_1 = lambda_2 exactly, so k = 1 must
  // report a width-2 cluster whose summed density is rotation invariant.
  const int L = 200, k0 = 10;
  const BoundaryGrid g = make_unit_disk_grid(L);
  const BasisMatrices basis = assemble_basis(g, k0);
  Density rho;
  rho.values = Eigen::VectorXd::Constant(L, 1.0);
  rho.alpha = rho.beta = 1.0;
  rho.gamma = kTwoPi;
  rho.grid_fingerprint = g.fingerprint();

  const Spectrum sp = solve_spectrum(basis, g, rho, 8);
  const ClusterGradient grad = cluster_gradient(sp, rho, 1);
  CHECK(grad.k == 1);
  CHECK(grad.cluster_width == 2);
  CHECK(grad.scale == doctest::Approx(-sp.eigenvalues[1]).epsilon(1e-12));
  // cos^2 + sin^2: the pair sum is constant along the boundary.
  const double mean = grad.w.mean();
  CHECK((grad.w.array() - mean).abs().maxCoeff() < 1e-8 * std::abs(mean));

  // The derivative of the pair sum along any mass-neutral direction vanishes
  // by symmetry; along a mass-increasing direction it is negative.
  const Eigen::VectorXd up = Eigen::VectorXd::Ones(L);
  CHECK(directional_derivative(grad, up, g.ds) < 0.0);
}

TEST_CASE("directional derivative is linear in the perturbation") {
  const int L = 160, k0 = 8;
  const BoundaryGrid g = make_unit_disk_grid(L);
  const BasisMatrices basis = assemble_basis(g, k0);
  std::mt19937_64 rng(909090);
  const Density rho = random_density(g, rng, 0.5, 1.5);
  const Spectrum sp = solve_spectrum(basis, g, rho, 6);
  const ClusterGradient grad = cluster_gradient(sp, rho, 2);

  std::uniform_real_distribution<double> H(-1.0, 1.0);
  const Eigen::VectorXd h1 = Eigen::VectorXd::NullaryExpr(L, [&](Eigen::Index) { return H(rng); });
  const Eigen::VectorXd h2 = Eigen::VectorXd::NullaryExpr(L, [&](Eigen::Index) { return H(rng); });
  const double d1 = directional_derivative(grad, h1, g.ds);
  const double d2 = directional_derivative(grad, h2, g.ds);
  const double d12 = directional_derivative(grad, 2.0 * h1 + 0.5 * h2, g.ds);
  CHECK(d12 == doctest::Approx(2.0 * d1 + 0.5 * d2).epsilon(1e-12));
}

TEST_CASE("cluster gradient validates its inputs") {
  const BoundaryGrid g = make_unit_disk_grid(120);
  const BasisMatrices basis = assemble_basis(g, 6);
  std::mt19937_64 rng(1);
  const Density rho = random_density(g, rng, 0.5, 1.5);
  const Spectrum sp = solve_spectrum(basis, g, rho, 5);

  CHECK_THROWS_AS(cluster_gradient(sp, rho, 0), std::invalid_argument);
  CHECK_THROWS_AS(cluster_gradient(sp, rho, 5), std::invalid_argument);

  Density other = random_density(g, rng, 0.5, 1.5);
  CHECK_THROWS_AS(cluster_gradient(sp, other, 1), std::invalid_argument);
}
