#include "steklov/harmonic_basis.hpp"

#include <stdexcept>

namespace steklov {

Eigen::VectorXd evaluate_basis_point(double x, double y, int k0) {
  Eigen::VectorXd row(2 * k0 + 1);
  row[0] = 1.0;
  double re = 1.0, im = 0.0;  // z^{m-1}, starting at z^0
  for (int m = 1; m <= k0; ++m) {
    const double re_m = re * x - im * y;  // z^m
    const double im_m = re * y + im * x;
    row[2 * m - 1] = re_m;
    row[2 * m] = im_m;
    re = re_m;
    im = im_m;
  }
  return row;
}

BasisMatrices assemble_basis(const BoundaryGrid& grid, int k0) {
  if (k0 < 1) throw std::invalid_argument("assemble_basis: k0 must be >= 1");
  const int L = grid.size();
  if (2 * k0 + 1 > L) {
    throw std::invalid_argument("assemble_basis: 2*k0+1 exceeds the number of samples");
  }
  BasisMatrices bm;
  bm.k0 = k0;
  bm.L = L;
  bm.B.resize(L, 2 * k0 + 1);
  bm.A.resize(L, 2 * k0 + 1);
  for (int l = 0; l < L; ++l) {
    const double x = grid.points(l, 0), y = grid.points(l, 1);
    const double nx = grid.normals(l, 0), ny = grid.normals(l, 1);
    bm.B(l, 0) = 1.0;
    bm.A(l, 0) = 0.0;
    double re = 1.0, im = 0.0;  // z^{m-1}
    for (int m = 1; m <= k0; ++m) {
      const double re_m = re * x - im * y;
      const double im_m = re * y + im * x;
      bm.B(l, 2 * m - 1) = re_m;
      bm.B(l, 2 * m) = im_m;
      const double md = static_cast<double>(m);
      bm.A(l, 2 * m - 1) = md * (re * nx - im * ny);
      bm.A(l, 2 * m) = md * (im * nx + re * ny);
      re = re_m;
      im = im_m;
    }
  }
  return bm;
}

}  // namespace steklov
