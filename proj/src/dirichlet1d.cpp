#include "steklov/dirichlet1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "steklov/util.hpp"

namespace steklov {

PiecewiseDensity1D make_piecewise1d(std::vector<double> breakpoints, std::vector<double> values) {
  if (values.size() != breakpoints.size() + 1) {
    throw std::invalid_argument("make_piecewise1d: values must have one more entry than breakpoints");
  }
  double prev = 0.0;
  for (double b : breakpoints) {
    if (!(b > prev && b < 1.0)) {
      throw std::invalid_argument("make_piecewise1d: breakpoints must be increasing inside (0,1)");
    }
    prev = b;
  }
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("make_piecewise1d: values must be positive");
  }
  return PiecewiseDensity1D{std::move(breakpoints), std::move(values)};
}

PiecewiseDensity1D make_two_piece(double breakpoint, double left_value, double right_value) {
  return make_piecewise1d({breakpoint}, {left_value, right_value});
}

double secular_det(double mu, const PiecewiseDensity1D& density) {
  if (!(mu > 0.0)) throw std::invalid_argument("secular_det: mu must be positive");
  if (density.breakpoints.size() == 1) {
    const double b = density.breakpoints[0];
    const double wl = std::sqrt(mu * density.values[0]);
    const double wr = std::sqrt(mu * density.values[1]);
    const double al = wl * b;          // left phase at the breakpoint
    const double ar = wr * (1.0 - b);  // right phase at the breakpoint
    // det [ sin(al), -sin(ar); wl cos(al), wr cos(ar) ]
    return std::sin(al) * wr * std::cos(ar) + wl * std::cos(al) * std::sin(ar);
  }
  // Propagate (u, u') from u(0)=0, u'(0)=1 across the pieces and return u(1).
  double u = 0.0, v = 1.0;
  double x = 0.0;
  const std::size_t n = density.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double x_next = i < density.breakpoints.size() ? density.breakpoints[i] : 1.0;
    const double h = x_next - x;
    const double w = std::sqrt(mu * density.values[i]);
    const double c = std::cos(w * h), s = std::sin(w * h);
    const double u_new = c * u + (s / w) * v;
    const double v_new = -w * s * u + c * v;
    u = u_new;
    v = v_new;
    x = x_next;
  }
  return u;
}

namespace {

double bisect_root(const PiecewiseDensity1D& density, double lo, double hi, double det_lo) {
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double dm = secular_det(mid, density);
    if (dm == 0.0) return mid;
    if ((det_lo < 0.0) == (dm < 0.0)) {
      lo = mid;
      det_lo = dm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section minimization of |det| on [lo, hi].
double minimize_abs_det(const PiecewiseDensity1D& density, double lo, double hi) {
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = std::abs(secular_det(c, density));
  double fd = std::abs(secular_det(d, density));
  for (int iter = 0; iter < 200 && hi - lo > 1e-13 * hi; ++iter) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = std::abs(secular_det(c, density));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = std::abs(secular_det(d, density));
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> dirichlet_eigs(const PiecewiseDensity1D& density, int n) {
  if (n < 1) throw std::invalid_argument("dirichlet_eigs: n must be >= 1");
  const double rho_max = *std::max_element(density.values.begin(), density.values.end());
  const double rho_min = *std::min_element(density.values.begin(), density.values.end());
  const double step = kPi * kPi / (2.0 * rho_max);
  double ceiling =
      (static_cast<double>(n) + 2.0) * (static_cast<double>(n) + 2.0) * kPi * kPi / rho_min;

  std::vector<double> roots;
  for (int extension = 0; extension <= 3; ++extension) {
    roots.clear();
    // Keep a 3-point window to spot |det| touching zero without sign change.
    double mu_pp = 0.0, det_pp = 0.0;
    double mu_p = 0.0, det_p = 0.0;
    bool have_p = false, have_pp = false;
    for (double mu = step; mu <= ceiling && static_cast<int>(roots.size()) < n; mu += step) {
      const double det = secular_det(mu, density);
      if (have_p) {
        if (det_p == 0.0) {
          roots.push_back(mu_p);
        } else if ((det_p < 0.0) != (det < 0.0)) {
          roots.push_back(bisect_root(density, mu_p, mu, det_p));
        } else if (have_pp && (det_pp < 0.0) == (det < 0.0) && std::abs(det_p) < std::abs(det_pp) &&
                   std::abs(det_p) < std::abs(det)) {
          const double mu_star = minimize_abs_det(density, mu_pp, mu);
          const double local_scale =
              std::max({1.0, std::abs(det_pp), std::abs(det)});
          if (std::abs(secular_det(mu_star, density)) < 1e-10 * local_scale) {
            roots.push_back(mu_star);  // touching root; the spectrum is simple
          }
        }
      }
      mu_pp = mu_p;
      det_pp = det_p;
      have_pp = have_p;
      mu_p = mu;
      det_p = det;
      have_p = true;
    }
    if (static_cast<int>(roots.size()) >= n) {
      roots.resize(static_cast<std::size_t>(n));
      return roots;
    }
    ceiling *= 2.0;
  }
  throw std::runtime_error("dirichlet_eigs: fewer roots than requested below the scan ceiling");
}

Dirichlet1DProbe classify_path_convexity(
    const std::function<PiecewiseDensity1D(double)>& path, const std::vector<int>& k_list,
    int n_t, double tol_curv, int workers) {
  if (n_t < 9) throw std::invalid_argument("classify_path_convexity: n_t must be >= 9");
  if (k_list.empty()) throw std::invalid_argument("classify_path_convexity: empty k_list");
  int k_max = 0;
  for (int k : k_list) {
    if (k < 1) throw std::invalid_argument("classify_path_convexity: k indices are 1-based");
    k_max = std::max(k_max, k);
  }

  Dirichlet1DProbe res;
  res.k_list = k_list;
  res.t_values.resize(n_t);
  res.mus.resize(n_t, static_cast<int>(k_list.size()));

  parallel_for(n_t, workers, [&](int i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_t - 1);
    res.t_values[i] = t;
    const std::vector<double> eigs = dirichlet_eigs(path(t), k_max);
    for (std::size_t j = 0; j < k_list.size(); ++j) {
      res.mus(i, static_cast<int>(j)) = eigs[static_cast<std::size_t>(k_list[j] - 1)];
    }
  });

  res.inv_mus = res.mus.cwiseInverse();
  for (int j = 0; j < res.mus.cols(); ++j) {
    res.mu_class.push_back(classify_curve(res.mus.col(j), tol_curv));
    res.inv_mu_class.push_back(classify_curve(res.inv_mus.col(j), tol_curv));
  }
  return res;
}

std::function<PiecewiseDensity1D(double)> half_split_path(double alpha, double beta) {
  return [alpha, beta](double t) {
    return make_two_piece(0.5, alpha + t * (beta - alpha), beta - t * (beta - alpha));
  };
}

std::function<PiecewiseDensity1D(double)> quarter_split_path(double alpha, double beta) {
  return [alpha, beta](double t) {
    const double outer = t * alpha + (1.0 - t) * beta;
    const double inner = t * beta + (1.0 - t) * alpha;
    return make_piecewise1d({0.25, 0.75}, {outer, inner, outer});
  };
}

}  // namespace steklov
