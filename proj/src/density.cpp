#include "steklov/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steklov/util.hpp"

namespace steklov {

std::uint64_t Density::fingerprint() const {
  std::uint64_t h = fnv1a64(values);
  h = fnv1a64(&alpha, sizeof(alpha), h);
  h = fnv1a64(&beta, sizeof(beta), h);
  h = fnv1a64(&gamma, sizeof(gamma), h);
  h = fnv1a64(&grid_fingerprint, sizeof(grid_fingerprint), h);
  return h;
}

bool is_admissible(const Density& density, const BoundaryGrid& grid, double box_tol,
                   double mass_rel_tol) {
  if (density.size() != grid.size()) return false;
  const double lo = density.alpha - box_tol, hi = density.beta + box_tol;
  for (int l = 0; l < density.size(); ++l) {
    const double v = density.values[l];
    if (!(v >= lo && v <= hi)) return false;
  }
  const double scale = std::max(1.0, std::abs(density.gamma));
  return std::abs(density.mass(grid) - density.gamma) <= mass_rel_tol * scale;
}

double high_density_budget(double alpha, double beta, double gamma, double total_length) {
  if (!(beta > alpha)) throw std::invalid_argument("high_density_budget: requires beta > alpha");
  return (gamma - alpha * total_length) / (beta - alpha);
}

Density project_to_admissible(const Eigen::VectorXd& raw, double alpha, double beta, double gamma,
                              const BoundaryGrid& grid) {
  const int L = grid.size();
  if (static_cast<int>(raw.size()) != L) {
    throw std::invalid_argument("project_to_admissible: raw size does not match grid");
  }
  if (!(beta > alpha)) throw std::invalid_argument("project_to_admissible: requires beta > alpha");
  const double perim = grid.total_length;
  if (!(alpha * perim < gamma && gamma < beta * perim)) {
    throw std::invalid_argument("project_to_admissible: infeasible (alpha, beta, gamma)");
  }

  const double ds = grid.ds;
  const double mass_scale = std::max(1.0, std::abs(gamma));
  auto mass_of_shift = [&](double c) {
    double m = 0.0;
    for (int l = 0; l < L; ++l) m += std::clamp(raw[l] + c, alpha, beta);
    return m * ds;
  };

  // Admissible inputs are fixed points: return them bit-for-bit.
  {
    bool in_box = true;
    for (int l = 0; l < L && in_box; ++l) in_box = raw[l] >= alpha && raw[l] <= beta;
    if (in_box && std::abs(raw.sum() * ds - gamma) <= 1e-12 * mass_scale) {
      Density d;
      d.values = raw;
      d.alpha = alpha;
      d.beta = beta;
      d.gamma = gamma;
      d.grid_fingerprint = grid.fingerprint();
      return d;
    }
  }

  // The shifted-clip mass is nondecreasing in c and spans
  // [alpha*perim, beta*perim], which contains gamma strictly.
  double lo = alpha - raw.maxCoeff();
  double hi = beta - raw.minCoeff();
  for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo) + std::abs(hi));
       ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mass_of_shift(mid) < gamma) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double c = 0.5 * (lo + hi);

  // Closing step: with the clipped sets frozen at the bisection point, the
  // mass is affine in c, so solve for the exact shift on the free nodes.
  for (int pass = 0; pass < 5; ++pass) {
    int n_lo = 0, n_hi = 0, n_free = 0;
    double free_sum = 0.0;
    for (int l = 0; l < L; ++l) {
      const double v = raw[l] + c;
      if (v <= alpha) {
        ++n_lo;
      } else if (v >= beta) {
        ++n_hi;
      } else {
        ++n_free;
        free_sum += raw[l];
      }
    }
    if (n_free == 0) break;
    const double c_star =
        (gamma / ds - alpha * n_lo - beta * n_hi - free_sum) / static_cast<double>(n_free);
    if (c_star == c) break;
    c = c_star;
    if (std::abs(mass_of_shift(c) - gamma) <= 1e-13 * mass_scale) break;
  }

  Density d;
  d.values.resize(L);
  for (int l = 0; l < L; ++l) d.values[l] = std::clamp(raw[l] + c, alpha, beta);
  d.alpha = alpha;
  d.beta = beta;
  d.gamma = gamma;
  d.grid_fingerprint = grid.fingerprint();
  if (std::abs(d.mass(grid) - gamma) > 1e-12 * mass_scale) {
    throw std::runtime_error("project_to_admissible: mass bisection did not converge");
  }
  return d;
}

namespace {

double mod_two_pi(double x) {
  double m = std::fmod(x, kTwoPi);
  if (m < 0.0) m += kTwoPi;
  return m;
}

}  // namespace

Density make_bang_bang(const std::vector<std::pair<double, double>>& arcs, double alpha,
                       double beta, const BoundaryGrid& grid) {
  if (!(beta > alpha)) throw std::invalid_argument("make_bang_bang: requires beta > alpha");
  struct Arc {
    double start;
    double len;
  };
  std::vector<Arc> norm;
  norm.reserve(arcs.size());
  for (const auto& [s, e] : arcs) {
    const double len = e - s;
    if (!(len > 0.0) || len > kTwoPi) {
      throw std::invalid_argument("make_bang_bang: arc must satisfy 0 < end - start <= 2*pi");
    }
    norm.push_back({mod_two_pi(s), len});
  }
  for (std::size_t i = 0; i < norm.size(); ++i) {
    for (std::size_t j = i + 1; j < norm.size(); ++j) {
      const bool overlap = mod_two_pi(norm[j].start - norm[i].start) < norm[i].len ||
                           mod_two_pi(norm[i].start - norm[j].start) < norm[j].len;
      if (overlap) throw std::invalid_argument("make_bang_bang: arcs overlap modulo 2*pi");
    }
  }

  const int L = grid.size();
  Density d;
  d.values = Eigen::VectorXd::Constant(L, alpha);
  for (int l = 0; l < L; ++l) {
    const double theta = mod_two_pi(grid.params[l]);
    for (const auto& a : norm) {
      if (mod_two_pi(theta - a.start) < a.len) {
        d.values[l] = beta;
        break;
      }
    }
  }
  d.alpha = alpha;
  d.beta = beta;
  d.gamma = d.values.sum() * grid.ds;  // achieved nodal mass
  d.grid_fingerprint = grid.fingerprint();
  return d;
}

int count_arcs(const Density& density) {
  const int L = density.size();
  if (L == 0) return 0;
  const double mid = 0.5 * (density.alpha + density.beta);
  auto high = [&](int l) { return density.values[l] > mid; };
  int transitions = 0;
  for (int l = 0; l < L; ++l) {
    if (high(l) && !high((l + L - 1) % L)) ++transitions;
  }
  if (transitions == 0) return high(0) ? 1 : 0;  // all-high or all-low
  return transitions;
}

}  // namespace steklov
