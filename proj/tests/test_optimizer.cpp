#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "steklov/bathtub.hpp"
#include "steklov/boundary_grid.hpp"
#include "steklov/density.hpp"
#include "steklov/harmonic_basis.hpp"
#include "steklov/optimizer.hpp"
#include "steklov/spectrum.hpp"
#include "steklov/util.hpp"

using namespace steklov;

namespace {

struct Setup {
  BoundaryGrid grid;
  BasisMatrices basis;
};

Setup small_disk(int L = 120, int k0 = 8) {
  Setup s{make_unit_disk_grid(L), {}};
  s.basis = assemble_basis(s.grid, k0);
  return s;
}

std::vector<int> arc_widths(const Density& d) {
  const int L = d.size();
  const double mid = 0.5 * (d.alpha + d.beta);
  std::vector<int> widths;
  for (int s = 0; s < L; ++s) {
    const bool hi = d.values[s] > mid;
    const bool prev_hi = d.values[(s + L - 1) % L] > mid;
    if (hi && !prev_hi) {
      int w = 0, j = s;
      while (d.values[j % L] > mid && w < L) {
        ++w;
        ++j;
      }
      widths.push_back(w);
    }
  }
  return widths;
}

}  // namespace

TEST_CASE("minimizing lambda_1 on the disk yields two equal antipodal arcs") {
  const Setup s = small_disk();
  OptimizationConfig cfg;
  cfg.k = 1;
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  cfg.gamma = kTwoPi;
  const OptimizationResult res = minimize_lambda_k(s.basis, s.grid, cfg);

  CHECK(res.termination_reason == "optimality");
  CHECK(res.objective < kTwoPi);  // strictly better than the uniform density
  CHECK(res.final_optimality.violation_measure == 0.0);
  const std::vector<int> widths = arc_widths(res.density);
  REQUIRE(widths.size() == 2);
  CHECK(widths[0] == 30);
  CHECK(widths[1] == 30);
  CHECK(is_admissible(res.density, s.grid, 1e-9, 1e-8));
  // Every node sits on a box bound.
  int off_bounds = 0;
  for (int l = 0; l < res.density.size(); ++l) {
    const double v = res.density.values[l];
    if (std::abs(v - cfg.alpha) > 1e-9 && std::abs(v - cfg.beta) > 1e-9) ++off_bounds;
  }
  CHECK(off_bounds == 0);
}

TEST_CASE("minimizing lambda_2 splits the pair and equalizes three arcs") {
  const Setup s = small_disk();
  OptimizationConfig cfg;
  cfg.k = 2;
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  cfg.gamma = kTwoPi;
  const OptimizationResult res = minimize_lambda_k(s.basis, s.grid, cfg);

  CHECK(res.termination_reason == "optimality");
  CHECK(res.final_optimality.violation_measure == 0.0);
  const std::vector<int> widths = arc_widths(res.density);
  REQUIRE(widths.size() == 3);
  for (int w : widths) CHECK(w == 20);
  // At the three-arc minimizer the first two eigenvalues merge.
  CHECK(res.multiplicity_at_opt == 2);
}

TEST_CASE("maximizing lambda_1 recovers the uniform-density value from random starts") {
  const Setup s = small_disk(240, 12);
  OptimizationConfig cfg;
  cfg.k = 1;
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  cfg.gamma = kTwoPi;
  cfg.init = InitKind::Random;
  cfg.restarts = 2;
  cfg.seed = 20240815;
  const OptimizationResult res = maximize_lambda_k(s.basis, s.grid, cfg);
  CHECK(res.objective >= kTwoPi - 2e-3);
  CHECK(res.objective <= kTwoPi + 1e-6);
  CHECK(is_admissible(res.density, s.grid, 1e-9, 1e-8));
}

TEST_CASE("resuming from a reported optimum terminates immediately") {
  const Setup s = small_disk();
  OptimizationConfig cfg;
  cfg.k = 1;
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  cfg.gamma = kTwoPi;
  const OptimizationResult first = minimize_lambda_k(s.basis, s.grid, cfg);
  REQUIRE(first.termination_reason == "optimality");

  OptimizationConfig resume = cfg;
  resume.init = InitKind::Values;
  resume.init_values = first.density.values;
  const OptimizationResult second = minimize_lambda_k(s.basis, s.grid, resume);
  CHECK(second.termination_reason == "optimality");
  CHECK(second.objective == doctest::Approx(first.objective).epsilon(1e-12));
  CHECK(second.iterates.size() <= 2);
}

TEST_CASE("bang-bang initialization is honored") {
  const Setup s = small_disk();
  OptimizationConfig cfg;
  cfg.k = 1;
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  cfg.gamma = kTwoPi;
  cfg.init = InitKind::BangBang;
  cfg.init_arcs = {{0.0, kPi / 3}, {kPi, kPi + kPi / 3}};
  const OptimizationResult res = minimize_lambda_k(s.basis, s.grid, cfg);
  CHECK(res.termination_reason == "optimality");
  const std::vector<int> widths = arc_widths(res.density);
  CHECK(widths.size() == 2);
}

TEST_CASE("degenerate box returns the unique admissible density") {
  const Setup s = small_disk();
  OptimizationConfig cfg;
  cfg.k = 2;
  cfg.alpha = 1.0;
  cfg.beta = 1.0;
  cfg.gamma = kTwoPi;
  const OptimizationResult res = minimize_lambda_k(s.basis, s.grid, cfg);
  CHECK(res.termination_reason == "singleton_feasible_set");
  CHECK((res.density.values.array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK(res.lambda_k == doctest::Approx(1.0).epsilon(1e-8));

  OptimizationConfig bad = cfg;
  bad.gamma = 5.0;
  CHECK_THROWS_AS(minimize_lambda_k(s.basis, s.grid, bad), std::invalid_argument);
}

TEST_CASE("optimizer validates configuration") {
  const Setup s = small_disk();
  OptimizationConfig cfg;
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  cfg.gamma = 2.0 * kTwoPi;  // > beta * |boundary|
  cfg.k = 1;
  CHECK_THROWS_AS(minimize_lambda_k(s.basis, s.grid, cfg), std::invalid_argument);

  cfg.gamma = kTwoPi;
  cfg.k = 0;
  CHECK_THROWS_AS(minimize_lambda_k(s.basis, s.grid, cfg), std::invalid_argument);
  cfg.k = 2 * s.basis.k0 + 1;
  CHECK_THROWS_AS(maximize_lambda_k(s.basis, s.grid, cfg), std::invalid_argument);
}

TEST_CASE("runs are deterministic for a fixed seed") {
  const Setup s = small_disk();
  OptimizationConfig cfg;
  cfg.k = 1;
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  cfg.gamma = kTwoPi;
  cfg.init = InitKind::Random;
  cfg.restarts = 2;
  cfg.seed = 99;
  const OptimizationResult a = minimize_lambda_k(s.basis, s.grid, cfg);
  const OptimizationResult b = minimize_lambda_k(s.basis, s.grid, cfg);
  CHECK(a.objective == b.objective);
  CHECK((a.density.values - b.density.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.termination_reason == b.termination_reason);
}

TEST_CASE("iteration history is recorded and monotone for minimization") {
  const Setup s = small_disk();
  OptimizationConfig cfg;
  cfg.k = 3;
  cfg.alpha = 0.5;
  cfg.beta = 1.5;
  cfg.gamma = kTwoPi;
  const OptimizationResult res = minimize_lambda_k(s.basis, s.grid, cfg);
  REQUIRE(!res.iterates.empty());
  for (std::size_t i = 1; i < res.iterates.size(); ++i) {
    CHECK(res.iterates[i].objective <= res.iterates[i - 1].objective + 1e-12);
  }
  CHECK(res.objective <= res.iterates.front().objective + 1e-12);
}
