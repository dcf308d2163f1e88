#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "steklov/dirichlet1d.hpp"
#include "steklov/util.hpp"

using namespace steklov;

namespace {

double density_at(const PiecewiseDensity1D& d, double x) {
  std::size_t piece = 0;
  while (piece < d.breakpoints.size() && x > d.breakpoints[piece]) ++piece;
  return d.values[piece];
}

// Independent finite-difference oracle: second-order tridiagonal
// discretization of -u'' = mu rho u with Dirichlet ends, eigenvalues located
// by Sylvester inertia counts (negative pivots of the LDL^T factorization of
// K - mu M) and bisection. Breakpoints must align with the grid for clean
// second-order accuracy; exact interface nodes take the mean of both sides.
class FdOracle {
 public:
  FdOracle(const PiecewiseDensity1D& d, int n_cells) : h_(1.0 / n_cells) {
    const int n = n_cells - 1;
    rho_.resize(n);
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * h_;
      bool on_break = false;
      for (double b : d.breakpoints) {
        if (std::abs(x - b) < 1e-12) {
          on_break = true;
          break;
        }
      }
      rho_[i] = on_break ? 0.5 * (density_at(d, x - 1e-9) + density_at(d, x + 1e-9))
                         : density_at(d, x);
    }
  }

  // Number of FD eigenvalues strictly below mu.
  int count_below(double mu) const {
    const double diag = 2.0 / (h_ * h_);
    const double off = -1.0 / (h_ * h_);
    int count = 0;
    double prev = 1.0;
    for (std::size_t i = 0; i < rho_.size(); ++i) {
      double d = diag - mu * rho_[i];
      if (i > 0) d -= off * off / prev;
      if (d < 0.0) ++count;
      if (std::abs(d) < 1e-300) d = 1e-300;
      prev = d;
    }
    return count;
  }

  double eigenvalue(int j) const {  // 1-based index
    double hi = 1.0;
    while (count_below(hi) < j) hi *= 2.0;
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (count_below(mid) >= j ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  double h_;
  std::vector<double> rho_;
};

}  // namespace

TEST_CASE("constant density reproduces the classical Dirichlet eigenvalues") {
  for (double c : {1.0, 0.37, 2.5}) {
    const PiecewiseDensity1D d = make_piecewise1d({}, {c});
    const std::vector<double> mu = dirichlet_eigs(d, 6);
    REQUIRE(mu.size() == 6);
    for (int k = 1; k <= 6; ++k) {
      const double exact = k * kPi * k * kPi / c;
      CHECK(std::abs(mu[k - 1] - exact) <= 1e-10 * exact);
    }
  }
}

TEST_CASE("two-piece density with ratio four matches the closed form") {
  // For rho = 1 on (0, 1/2) and 4 on (1/2, 1) the matching condition reduces
  // to sin(s/2) (3 cos^2(s/2) - 1) = 0 with s = sqrt(mu), giving the root
  // families s = 2 a + 2 pi j, s = 2(pi - a) + 2 pi j (a = arccos(1/sqrt 3))
  // and s = 2 pi j.
  const double a = std::acos(1.0 / std::sqrt(3.0));
  std::vector<double> s_roots = {2 * a, 2 * (kPi - a), kTwoPi, kTwoPi + 2 * a,
                                 2 * (kTwoPi - a), 2 * kTwoPi};
  const PiecewiseDensity1D d = make_two_piece(0.5, 1.0, 4.0);
  const std::vector<double> mu = dirichlet_eigs(d, 6);
  REQUIRE(mu.size() == 6);
  for (int i = 0; i < 6; ++i) {
    CHECK(mu[i] == doctest::Approx(s_roots[i] * s_roots[i]).epsilon(1e-10));
  }
}

TEST_CASE("secular solver agrees with the finite-difference oracle") {
  const std::vector<PiecewiseDensity1D> cases = {
      make_two_piece(0.25, 0.5, 1.5),
      make_piecewise1d({0.25, 0.5, 0.75}, {2.0, 0.7, 1.3, 0.4}),
      make_piecewise1d({0.5}, {1.0, 9.0}),  // sqrt ratio 3: strong contrast
  };
  for (const auto& d : cases) {
    const std::vector<double> mu = dirichlet_eigs(d, 5);
    const FdOracle oracle(d, 32768);
    for (int j = 1; j <= 5; ++j) {
      const double fd = oracle.eigenvalue(j);
      CHECK(std::abs(mu[j - 1] - fd) <= 5e-6 * fd);
    }
    for (int j = 1; j < 5; ++j) CHECK(mu[j] > mu[j - 1]);
  }
}

TEST_CASE("secular function changes sign across each eigenvalue") {
  const PiecewiseDensity1D d = make_two_piece(0.3, 1.2, 0.6);
  const std::vector<double> mu = dirichlet_eigs(d, 4);
  for (double m : mu) {
    const double eps = 1e-6 * m;
    CHECK(secular_det(m - eps, d) * secular_det(m + eps, d) < 0.0);
  }
}

TEST_CASE("piecewise construction validates input") {
  CHECK_THROWS_AS(make_piecewise1d({0.5}, {1.0}), std::invalid_argument);        // size mismatch
  CHECK_THROWS_AS(make_piecewise1d({0.7, 0.3}, {1, 1, 1}), std::invalid_argument);  // not sorted
  CHECK_THROWS_AS(make_piecewise1d({0.0}, {1.0, 2.0}), std::invalid_argument);   // at boundary
  CHECK_THROWS_AS(make_piecewise1d({}, {-1.0}), std::invalid_argument);          // negative
  CHECK_THROWS_AS(make_two_piece(0.5, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("appendix paths have the advertised endpoints") {
  const double alpha = 0.5, beta = 1.5;
  const auto half = half_split_path(alpha, beta);
  const PiecewiseDensity1D h0 = half(0.0), h1 = half(1.0);
  CHECK(h0.values[0] == doctest::Approx(alpha));
  CHECK(h0.values[1] == doctest::Approx(beta));
  CHECK(h1.values[0] == doctest::Approx(beta));
  CHECK(h1.values[1] == doctest::Approx(alpha));
  CHECK(h0.breakpoints[0] == doctest::Approx(0.5));

  const auto quarter = quarter_split_path(alpha, beta);
  const PiecewiseDensity1D q0 = quarter(0.0), q1 = quarter(1.0);
  // t = 0 is the complementary profile rho_4, t = 1 is rho_3.
  CHECK(q0.values[0] == doctest::Approx(beta));
  CHECK(q0.values[1] == doctest::Approx(alpha));
  CHECK(q0.values[2] == doctest::Approx(beta));
  CHECK(q1.values[0] == doctest::Approx(alpha));
  CHECK(q1.values[1] == doctest::Approx(beta));
  CHECK(q1.values[2] == doctest::Approx(alpha));
}

TEST_CASE("path classification is deterministic and consistent") {
  const auto path = half_split_path(0.5, 1.5);
  const Dirichlet1DProbe p1 = classify_path_convexity(path, {1, 2}, 9, -1.0, 1);
  const Dirichlet1DProbe p3 = classify_path_convexity(path, {1, 2}, 9, -1.0, 3);
  CHECK((p1.mus - p3.mus).cwiseAbs().maxCoeff() == 0.0);
  CHECK((p1.inv_mus.array() * p1.mus.array() - 1.0).abs().maxCoeff() < 1e-12);

  // Endpoints agree with the direct solver.
  const std::vector<double> mu0 = dirichlet_eigs(path(0.0), 2);
  CHECK(p1.mus(0, 0) == doctest::Approx(mu0[0]).epsilon(1e-10));
  CHECK(p1.mus(0, 1) == doctest::Approx(mu0[1]).epsilon(1e-10));
}
