#ifndef STEKLOV_BOUNDARY_GRID_HPP
#define STEKLOV_BOUNDARY_GRID_HPP

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Core>

namespace steklov {

/// Uniform arc-length sampling of the boundary of a simply connected planar
/// domain. All downstream boundary integrals use the rectangle rule
/// sum_l f(p_l) * ds, so the grid carries the step and the exact total length.
struct BoundaryGrid {
  Eigen::MatrixX2d points;   ///< p_l, one row per node
  Eigen::MatrixX2d normals;  ///< outward unit normals, one row per node
  Eigen::VectorXd params;    ///< curve parameter (angle theta) of each node
  double ds = 0.0;           ///< arc-length step between consecutive nodes
  double total_length = 0.0; ///< |dOmega| = ds * L
  std::string parametrization_id; ///< "unit_disk" or "polar_graph"

  int size() const { return static_cast<int>(points.rows()); }

  /// Content hash over points, normals and scalars; used by output manifests.
  std::uint64_t fingerprint() const;
};

/// Unit circle sampled at theta_l = 2*pi*l/L (l = 0..L-1). Normals equal the
/// points. Throws std::invalid_argument for L < 3.
BoundaryGrid make_unit_disk_grid(int L);

/// Star-shaped boundary r = R(theta), sampled uniformly in arc length via
/// cumulative arc-length inversion (composite Simpson table with 16x
/// oversampling, then bisection). `radius` must be strictly positive and
/// 2*pi-periodic; `radius_deriv` is its derivative. Throws
/// std::invalid_argument for non-positive radius or L < 3, and
/// std::runtime_error if the inversion fails to converge.
BoundaryGrid make_polar_graph_grid(const std::function<double(double)>& radius,
                                   const std::function<double(double)>& radius_deriv,
                                   int L);

/// Writes the grid as CSV with header theta_or_s,x,y,nx,ny.
void write_grid_csv(const BoundaryGrid& grid, const std::string& path);

}  // namespace steklov

#endif
