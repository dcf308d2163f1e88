#include "steklov/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace steklov {

namespace {

void check_inputs(const BasisMatrices& basis, const BoundaryGrid& grid, const Density& density) {
  if (basis.L != grid.size() || density.size() != grid.size()) {
    throw std::invalid_argument("solve_spectrum: basis/grid/density sizes do not match");
  }
  if (density.values.minCoeff() <= 0.0) {
    throw std::invalid_argument("solve_spectrum: density must be strictly positive");
  }
}

Eigen::MatrixXd stiffness(const BasisMatrices& basis, const BoundaryGrid& grid,
                          double* asymmetry_norm) {
  Eigen::MatrixXd K = grid.ds * (basis.B.transpose() * basis.A);
  if (asymmetry_norm != nullptr) {
    const double denom = K.norm();
    *asymmetry_norm = denom > 0.0 ? (K - K.transpose()).norm() / denom : 0.0;
  }
  K = 0.5 * (K + K.transpose()).eval();
  return K;
}

Eigen::MatrixXd mass(const BasisMatrices& basis, const BoundaryGrid& grid,
                     const Density& density) {
  Eigen::MatrixXd M =
      grid.ds * (basis.B.transpose() * density.values.asDiagonal() * basis.B);
  M = 0.5 * (M + M.transpose()).eval();
  return M;
}

}  // namespace

Spectrum solve_spectrum(const BasisMatrices& basis, const BoundaryGrid& grid,
                        const Density& density, int n_eigs) {
  check_inputs(basis, grid, density);
  const int n = 2 * basis.k0 + 1;
  if (n_eigs < 1 || n_eigs > n) {
    throw std::invalid_argument("solve_spectrum: n_eigs must be in [1, 2*k0+1]");
  }

  Spectrum sp;
  const Eigen::MatrixXd K = stiffness(basis, grid, &sp.asymmetry_norm);
  Eigen::MatrixXd M = mass(basis, grid, density);

  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) {
    M.diagonal().array() += 1e-12 * M.trace() / static_cast<double>(n);
    llt.compute(M);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error(
          "solve_spectrum: mass matrix not positive definite even after regularization; "
          "reduce k0 or refine the grid");
    }
  }

  // Reduce to a standard symmetric problem: C = L^-1 K L^-T with M = L L^T.
  Eigen::MatrixXd C = llt.matrixL().solve(K);
  C = llt.matrixL().solve(C.transpose().eval());
  C = 0.5 * (C + C.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("solve_spectrum: eigensolver did not converge");
  }

  sp.eigenvalues = es.eigenvalues().head(n_eigs);
  // V = L^-T Y keeps traces^T D2 traces = Y^T Y = I exactly.
  sp.coefficients = llt.matrixU().solve(es.eigenvectors().leftCols(n_eigs));
  sp.traces = basis.B * sp.coefficients;

  for (int j = 0; j < n_eigs; ++j) {
    int idx = 0;
    sp.traces.col(j).cwiseAbs().maxCoeff(&idx);
    if (sp.traces(idx, j) < 0.0) {
      sp.traces.col(j) = -sp.traces.col(j);
      sp.coefficients.col(j) = -sp.coefficients.col(j);
    }
  }
  sp.density_fingerprint = density.fingerprint();
  return sp;
}

double rayleigh_quotient(const BasisMatrices& basis, const BoundaryGrid& grid,
                         const Density& density, const Eigen::VectorXd& coefficients) {
  check_inputs(basis, grid, density);
  if (coefficients.size() != 2 * basis.k0 + 1) {
    throw std::invalid_argument("rayleigh_quotient: coefficient size mismatch");
  }
  const Eigen::MatrixXd K = stiffness(basis, grid, nullptr);
  const Eigen::MatrixXd M = mass(basis, grid, density);
  const double den = coefficients.dot(M * coefficients);
  if (!(den > 0.0) || !std::isfinite(den)) {
    throw std::invalid_argument("rayleigh_quotient: trace vanishes in the rho-weighted norm");
  }
  return coefficients.dot(K * coefficients) / den;
}

std::pair<int, int> eigenvalue_cluster(const Eigen::VectorXd& eigenvalues, int k,
                                       double rel_tol) {
  const int n = static_cast<int>(eigenvalues.size());
  if (k < 0 || k >= n) throw std::invalid_argument("eigenvalue_cluster: k out of range");
  auto same_cluster = [&](int i) {
    // Gap between eigenvalues i and i+1.
    const double scale = std::max({1.0, std::abs(eigenvalues[i]), std::abs(eigenvalues[i + 1])});
    return std::abs(eigenvalues[i + 1] - eigenvalues[i]) <= rel_tol * scale;
  };
  int lo = k, hi = k;
  while (lo > 0 && same_cluster(lo - 1)) --lo;
  while (hi + 1 < n && same_cluster(hi)) ++hi;
  return {lo, hi};
}

}  // namespace steklov
