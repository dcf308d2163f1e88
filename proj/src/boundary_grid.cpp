#include "steklov/boundary_grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "steklov/util.hpp"

namespace steklov {

std::uint64_t BoundaryGrid::fingerprint() const {
  std::uint64_t h = fnv1a64(parametrization_id.data(), parametrization_id.size());
  h = fnv1a64(&ds, sizeof(ds), h);
  h = fnv1a64(&total_length, sizeof(total_length), h);
  h = fnv1a64(Eigen::MatrixXd(points), h);
  h = fnv1a64(Eigen::MatrixXd(normals), h);
  h = fnv1a64(params, h);
  return h;
}

BoundaryGrid make_unit_disk_grid(int L) {
  if (L < 3) throw std::invalid_argument("make_unit_disk_grid: L must be >= 3");
  BoundaryGrid g;
  g.points.resize(L, 2);
  g.normals.resize(L, 2);
  g.params.resize(L);
  for (int l = 0; l < L; ++l) {
    const double theta = kTwoPi * static_cast<double>(l) / static_cast<double>(L);
    g.params[l] = theta;
    g.points(l, 0) = std::cos(theta);
    g.points(l, 1) = std::sin(theta);
  }
  g.normals = g.points;
  g.ds = kTwoPi / static_cast<double>(L);
  g.total_length = kTwoPi;
  g.parametrization_id = "unit_disk";
  return g;
}

namespace {

// Arc-length speed |dp/dtheta| of the curve theta -> R(theta)(cos theta, sin theta).
double speed(const std::function<double(double)>& radius,
             const std::function<double(double)>& radius_deriv, double theta) {
  const double r = radius(theta);
  const double rp = radius_deriv(theta);
  return std::sqrt(r * r + rp * rp);
}

}  // namespace

BoundaryGrid make_polar_graph_grid(const std::function<double(double)>& radius,
                                   const std::function<double(double)>& radius_deriv,
                                   int L) {
  if (L < 3) throw std::invalid_argument("make_polar_graph_grid: L must be >= 3");

  // Cumulative arc-length table on a 16x oversampled theta grid, one Simpson
  // step (with midpoint) per subinterval: 4th-order accurate globally.
  const int M = 16 * L;
  const double h = kTwoPi / static_cast<double>(M);
  std::vector<double> theta_tab(M + 1), s_tab(M + 1), g_tab(M + 1);
  for (int j = 0; j <= M; ++j) {
    theta_tab[j] = h * static_cast<double>(j);
    const double r = radius(theta_tab[j]);
    if (!(r > 0.0)) {
      throw std::invalid_argument("make_polar_graph_grid: radius must be strictly positive");
    }
    g_tab[j] = speed(radius, radius_deriv, theta_tab[j]);
  }
  s_tab[0] = 0.0;
  for (int j = 0; j < M; ++j) {
    const double mid = theta_tab[j] + 0.5 * h;
    const double rm = radius(mid);
    if (!(rm > 0.0)) {
      throw std::invalid_argument("make_polar_graph_grid: radius must be strictly positive");
    }
    const double gm = speed(radius, radius_deriv, mid);
    s_tab[j + 1] = s_tab[j] + (h / 6.0) * (g_tab[j] + 4.0 * gm + g_tab[j + 1]);
  }
  const double total = s_tab[M];

  // Continuous extension of the table inside one subinterval, again by a
  // single Simpson step from the left table node; monotone in theta.
  auto cumulative = [&](double theta) -> double {
    if (theta <= 0.0) return 0.0;
    if (theta >= kTwoPi) return total;
    int j = static_cast<int>(theta / h);
    if (j >= M) j = M - 1;
    const double a = theta_tab[j];
    const double w = theta - a;
    if (w <= 0.0) return s_tab[j];
    const double gm = speed(radius, radius_deriv, a + 0.5 * w);
    return s_tab[j] + (w / 6.0) * (g_tab[j] + 4.0 * gm + speed(radius, radius_deriv, theta));
  };

  BoundaryGrid g;
  g.points.resize(L, 2);
  g.normals.resize(L, 2);
  g.params.resize(L);
  g.ds = total / static_cast<double>(L);
  g.total_length = total;
  g.parametrization_id = "polar_graph";

  for (int l = 0; l < L; ++l) {
    const double target = g.ds * static_cast<double>(l);
    double theta;
    if (l == 0) {
      theta = 0.0;
    } else {
      // Bracket via the table, then bisect on the continuous cumulative map.
      auto it = std::upper_bound(s_tab.begin(), s_tab.end(), target);
      int j = static_cast<int>(it - s_tab.begin());
      if (j < 1) j = 1;
      if (j > M) j = M;
      double lo = theta_tab[j - 1], hi = theta_tab[j];
      for (int iter = 0; iter < 200 && hi - lo > 1e-15 * kTwoPi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (cumulative(mid) < target) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      theta = 0.5 * (lo + hi);
      if (std::abs(cumulative(theta) - target) > 1e-10 * std::max(1.0, total)) {
        throw std::runtime_error("make_polar_graph_grid: arc-length inversion did not converge");
      }
    }
    g.params[l] = theta;
    const double r = radius(theta);
    const double rp = radius_deriv(theta);
    const double c = std::cos(theta), s = std::sin(theta);
    g.points(l, 0) = r * c;
    g.points(l, 1) = r * s;
    // Tangent dp/dtheta; the curve is counterclockwise, so the outward normal
    // is the tangent rotated by -pi/2.
    const double tx = rp * c - r * s;
    const double ty = rp * s + r * c;
    const double tn = std::sqrt(tx * tx + ty * ty);
    g.normals(l, 0) = ty / tn;
    g.normals(l, 1) = -tx / tn;
  }
  return g;
}

void write_grid_csv(const BoundaryGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_grid_csv: cannot open " + path);
  out << "theta_or_s,x,y,nx,ny\n";
  for (int l = 0; l < grid.size(); ++l) {
    out << format_double(grid.params[l]) << ',' << format_double(grid.points(l, 0)) << ','
        << format_double(grid.points(l, 1)) << ',' << format_double(grid.normals(l, 0)) << ','
        << format_double(grid.normals(l, 1)) << '\n';
  }
  if (!out) throw std::runtime_error("write_grid_csv: write failed for " + path);
}

}  // namespace steklov
