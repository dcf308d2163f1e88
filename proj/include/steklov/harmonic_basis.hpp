#ifndef STEKLOV_HARMONIC_BASIS_HPP
#define STEKLOV_HARMONIC_BASIS_HPP

#include <Eigen/Core>

#include "steklov/boundary_grid.hpp"

namespace steklov {

/// Values and outward normal derivatives of the harmonic polynomial basis
/// {1, r^m cos(m theta), r^m sin(m theta) : 1 <= m <= k0} sampled on a
/// boundary grid. Column order: constant, then (cos, sin) pairs for
/// m = 1..k0, so there are 2*k0+1 columns.
struct BasisMatrices {
  Eigen::MatrixXd B;  ///< L x (2k0+1), B(l,j) = phi_j(p_l)
  Eigen::MatrixXd A;  ///< L x (2k0+1), A(l,j) = grad phi_j(p_l) . n_l
  int k0 = 0;
  int L = 0;
};

/// Evaluates all 2*k0+1 basis functions at a single point via iterated
/// complex multiplication z^m (no per-entry trigonometric calls).
Eigen::VectorXd evaluate_basis_point(double x, double y, int k0);

/// Assembles B and A on the grid. The gradients use the closed forms
/// grad Re(z^m) = m (Re z^{m-1}, -Im z^{m-1}) and
/// grad Im(z^m) = m (Im z^{m-1},  Re z^{m-1}).
/// Throws std::invalid_argument when k0 < 1 or 2*k0+1 > L.
BasisMatrices assemble_basis(const BoundaryGrid& grid, int k0);

}  // namespace steklov

#endif
