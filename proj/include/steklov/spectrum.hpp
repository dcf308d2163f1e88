#ifndef STEKLOV_SPECTRUM_HPP
#define STEKLOV_SPECTRUM_HPP

#include <cstdint>
#include <utility>

#include <Eigen/Core>

#include "steklov/boundary_grid.hpp"
#include "steklov/density.hpp"
#include "steklov/harmonic_basis.hpp"

namespace steklov {

/// Solution of the discrete generalized eigenproblem
/// B^T D1 A V = sigma B^T D2 B V with D1 = ds*I and D2 = diag(rho*ds).
/// Eigenvalues are ascending and include sigma_0 ~= 0 at index 0. Trace
/// column k holds u_k at the grid nodes, normalized so that
/// traces^T D2 traces = I and the largest-magnitude entry is positive.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd traces;        ///< L x n_eigs
  Eigen::MatrixXd coefficients;  ///< (2k0+1) x n_eigs basis coefficients V
  std::uint64_t density_fingerprint = 0;
  double asymmetry_norm = 0.0;  ///< ||K - K^T|| / ||K|| before symmetrization

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Solves for the n_eigs smallest eigenpairs. The stiffness side is
/// symmetrized; the mass side is reduced by Cholesky factorization, with one
/// diagonal regularization retry of 1e-12*trace(M)/n before giving up.
/// Throws std::invalid_argument on bad sizes or non-positive density and
/// std::runtime_error on factorization/eigensolver failure.
Spectrum solve_spectrum(const BasisMatrices& basis, const BoundaryGrid& grid,
                        const Density& density, int n_eigs);

/// (v^T K v) / (v^T M v) for a basis coefficient vector v. Throws
/// std::invalid_argument when the rho-weighted norm of the trace vanishes.
double rayleigh_quotient(const BasisMatrices& basis, const BoundaryGrid& grid,
                         const Density& density, const Eigen::VectorXd& coefficients);

/// Inclusive index range [first, second] of the multiplicity cluster
/// containing eigenvalue k: consecutive eigenvalues are grouped while their
/// gap is at most rel_tol * max(1, |sigma|).
std::pair<int, int> eigenvalue_cluster(const Eigen::VectorXd& eigenvalues, int k,
                                       double rel_tol = 1e-6);

}  // namespace steklov

#endif
