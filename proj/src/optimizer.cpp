#include "steklov/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "steklov/util.hpp"

namespace steklov {

namespace {

struct Objective {
  double value = 0.0;  // lambda_k * gamma
  double lambda_k = 0.0;
  Spectrum spectrum;
};

int modes_needed(const OptimizationConfig& cfg, int basis_size) {
  return std::min(basis_size, cfg.k + cfg.j_guard + 1);
}

Objective evaluate(const BasisMatrices& basis, const BoundaryGrid& grid, const Density& rho,
                   const OptimizationConfig& cfg) {
  Objective obj;
  obj.spectrum = solve_spectrum(basis, grid, rho, modes_needed(cfg, 2 * basis.k0 + 1));
  obj.lambda_k = obj.spectrum.eigenvalues[cfg.k];
  obj.value = obj.lambda_k * cfg.gamma;
  return obj;
}

// Traces and squared-trace sum of the modes whose first-order behavior is
// coupled to the step. Minimization guards i = 1..k, so only modes merging
// with lambda_k from below are active; maximization guards i = k..k+j-1, so
// the cluster extends upward, capped by j_guard.
struct ActiveCluster {
  int lo = 0, hi = 0;
  Eigen::MatrixXd traces;  // L x width
  Eigen::VectorXd w;       // sum of squared traces
};

ActiveCluster active_cluster(const Spectrum& sp, const OptimizationConfig& cfg, double tol) {
  auto close = [&](int i) {
    const double scale =
        std::max({1.0, std::abs(sp.eigenvalues[i]), std::abs(sp.eigenvalues[i + 1])});
    return sp.eigenvalues[i + 1] - sp.eigenvalues[i] <= tol * scale;
  };
  ActiveCluster c;
  c.lo = c.hi = cfg.k;
  if (cfg.direction == Direction::Minimize) {
    while (c.lo > 1 && close(c.lo - 1)) --c.lo;
  } else {
    const int cap = std::min(sp.size() - 1, cfg.k + cfg.j_guard - 1);
    while (c.hi < cap && close(c.hi)) ++c.hi;
  }
  c.traces = sp.traces.middleCols(c.lo, c.hi - c.lo + 1);
  c.w = c.traces.cwiseAbs2().rowwise().sum();
  return c;
}

// Full multiplicity group of lambda_k at the reporting tolerance; this is
// the boundary function entering the threshold optimality rule.
Eigen::VectorXd strict_cluster_w(const Spectrum& sp, const OptimizationConfig& cfg) {
  const auto range = eigenvalue_cluster(sp.eigenvalues, cfg.k, cfg.cluster_tol);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(sp.traces.rows());
  for (int j = range.first; j <= range.second; ++j) w += sp.traces.col(j).cwiseAbs2();
  return w;
}

bool improves(double cand, double incumbent, Direction direction) {
  const double margin = 1e-14 * std::max(1.0, std::abs(incumbent));
  return direction == Direction::Minimize ? cand < incumbent - margin
                                          : cand > incumbent + margin;
}

// S(h) = U^T diag(h ds) U: the first-order perturbation of the active block
// along a density change h (up to the common factor -lambda_k). The sorted
// eigenvalue lambda_k moves with the extremal eigenvalue of this matrix, so
// the step direction solves max_h min-eig S(h) (minimization) or
// min_h max-eig S(h) (maximization) over feasible directions h = rho' - rho.
Eigen::MatrixXd perturbation_matrix(const Eigen::MatrixXd& U, const Eigen::VectorXd& h,
                                    double ds) {
  return ds * (U.transpose() * h.asDiagonal() * U);
}

double extremal_eig(const Eigen::MatrixXd& S, Direction direction, Eigen::VectorXd* vec) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  // Minimization wants every active mode pushed down together, which is
  // limited by the smallest eigenvalue; maximization mirrors with the largest.
  const int idx = direction == Direction::Minimize ? 0 : static_cast<int>(S.rows()) - 1;
  if (vec != nullptr) *vec = es.eigenvectors().col(idx);
  return es.eigenvalues()[idx];
}

// Frank-Wolfe on the extremal-eigenvalue objective over the feasible
// direction set. Each linearized subproblem is a bathtub problem on the
// squared mode combination (U v)^2; the segment search uses the affinity of
// S in h, so only small matrices are re-decomposed.
Eigen::VectorXd minimax_direction(const Density& rho, const ActiveCluster& cluster,
                                  const BoundaryGrid& grid, const OptimizationConfig& cfg,
                                  int inner_iters) {
  const bool minimize = cfg.direction == Direction::Minimize;
  const Direction vert_dir = minimize ? Direction::Maximize : Direction::Minimize;
  const int width = static_cast<int>(cluster.traces.cols());
  const double sign = minimize ? 1.0 : -1.0;

  auto vertex_dir = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXd w_v = (cluster.traces * v).cwiseAbs2();
    return Eigen::VectorXd(
        bathtub_extremize(w_v, grid, cfg.alpha, cfg.beta, cfg.gamma, vert_dir).density.values -
        rho.values);
  };

  // Start from the vertex of the branch that carries the sorted lambda_k:
  // the top of the active block when minimizing, the bottom when maximizing.
  Eigen::VectorXd h = vertex_dir(Eigen::VectorXd::Unit(width, minimize ? width - 1 : 0));
  Eigen::MatrixXd S_h = perturbation_matrix(cluster.traces, h, grid.ds);
  double f_h = sign * extremal_eig(S_h, cfg.direction, nullptr);

  for (int m = 1; m < inner_iters; ++m) {
    Eigen::VectorXd v;
    extremal_eig(S_h, cfg.direction, &v);
    const Eigen::VectorXd p = vertex_dir(v);
    const Eigen::MatrixXd S_p = perturbation_matrix(cluster.traces, p, grid.ds);

    // Golden-section search for the best mix (1-g) h + g p; the objective
    // g -> extremal eig of (1-g) S_h + g S_p is unimodal.
    const double grl = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0, hi = 1.0;
    double c = hi - grl * (hi - lo), d = lo + grl * (hi - lo);
    auto value = [&](double g) {
      return sign * extremal_eig(((1.0 - g) * S_h + g * S_p).eval(), cfg.direction, nullptr);
    };
    double fc = value(c), fd = value(d);
    for (int it = 0; it < 60; ++it) {
      if (fc > fd) {  // keep the side with the larger signed objective
        hi = d;
        d = c;
        fd = fc;
        c = hi - grl * (hi - lo);
        fc = value(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + grl * (hi - lo);
        fd = value(d);
      }
    }
    const double g_best = 0.5 * (lo + hi);
    const double f_new = value(g_best);
    if (f_new <= f_h + 1e-12 * std::abs(f_h) + 1e-15) break;  // no inner progress
    h = (1.0 - g_best) * h + g_best * p;
    S_h = ((1.0 - g_best) * S_h + g_best * S_p).eval();
    f_h = f_new;
  }
  return h;
}

Density combine(const Density& rho, const Eigen::VectorXd& h, double theta,
                const BoundaryGrid& grid) {
  // rho + theta h is a convex combination of admissible densities, so box
  // and mass hold without projection (clamped for pure rounding).
  Density d;
  d.values = (rho.values + theta * h).cwiseMax(rho.alpha).cwiseMin(rho.beta);
  d.alpha = rho.alpha;
  d.beta = rho.beta;
  d.gamma = rho.gamma;
  d.grid_fingerprint = grid.fingerprint();
  return d;
}

Density initial_density(const BoundaryGrid& grid, const OptimizationConfig& cfg, int restart) {
  const int L = grid.size();
  switch (cfg.init) {
    case InitKind::Constant: {
      const Eigen::VectorXd raw = Eigen::VectorXd::Constant(L, cfg.gamma / grid.total_length);
      return project_to_admissible(raw, cfg.alpha, cfg.beta, cfg.gamma, grid);
    }
    case InitKind::Random: {
      std::mt19937_64 rng(cfg.seed + 1000003ULL * static_cast<std::uint64_t>(restart));
      std::uniform_real_distribution<double> dist(cfg.alpha, cfg.beta);
      Eigen::VectorXd raw(L);
      for (int l = 0; l < L; ++l) raw[l] = dist(rng);
      return project_to_admissible(raw, cfg.alpha, cfg.beta, cfg.gamma, grid);
    }
    case InitKind::BangBang: {
      const Density bb = make_bang_bang(cfg.init_arcs, cfg.alpha, cfg.beta, grid);
      return project_to_admissible(bb.values, cfg.alpha, cfg.beta, cfg.gamma, grid);
    }
    case InitKind::Values: {
      if (static_cast<int>(cfg.init_values.size()) != L) {
        throw std::invalid_argument("optimizer: init_values size does not match the grid");
      }
      return project_to_admissible(cfg.init_values, cfg.alpha, cfg.beta, cfg.gamma, grid);
    }
  }
  throw std::logic_error("optimizer: unknown init kind");
}

// Mass-preserving periodic Gaussian blur (unit-sum circular convolution of
// admissible values stays admissible: convex combinations within the box,
// node sum unchanged).
Eigen::VectorXd circular_blur(const Eigen::VectorXd& v, double sigma_nodes) {
  const int L = static_cast<int>(v.size());
  const int half = std::min(L / 2, static_cast<int>(std::ceil(4.0 * sigma_nodes)));
  Eigen::VectorXd kernel(2 * half + 1);
  for (int m = -half; m <= half; ++m) {
    kernel[m + half] = std::exp(-0.5 * (m * m) / (sigma_nodes * sigma_nodes));
  }
  kernel /= kernel.sum();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(L);
  for (int l = 0; l < L; ++l) {
    double acc = 0.0;
    for (int m = -half; m <= half; ++m) {
      acc += kernel[m + half] * v[(l + m % L + L) % L];
    }
    out[l] = acc;
  }
  return out;
}

int min_high_arc_width(const Density& rho) {
  const int L = rho.size();
  const double mid = 0.5 * (rho.alpha + rho.beta);
  auto high = [&](int l) { return rho.values[l] > mid; };
  int best = L + 1;
  for (int l = 0; l < L; ++l) {
    if (high(l) && !high((l + L - 1) % L)) {
      int len = 0;
      while (len < L && high((l + len) % L)) ++len;
      best = std::min(best, len);
    }
  }
  return best == L + 1 ? (high(0) ? L : 0) : best;
}

constexpr double kActivationTol = 1e-3;  // relative gap for guard coupling
constexpr int kInnerIters = 30;          // Frank-Wolfe direction refinements

// Endgame for bang-bang iterates: once the density is a near-optimal step
// function, the residual error is a mis-placed arc endpoint. Swapping a
// single boundary node between two arc ends preserves the mass exactly but
// moves lambda_k only at second order, so no first-order candidate can
// certify the move; a local search on the true objective resolves it.
struct Polished {
  Density rho;
  Objective obj;
};

Polished discrete_polish(const BasisMatrices& basis, const BoundaryGrid& grid,
                         const OptimizationConfig& cfg, const Density& start_rho,
                         Objective start_obj) {
  Polished best{start_rho, std::move(start_obj)};
  const double tol_pure = 1e-9 * (cfg.beta - cfg.alpha);
  const int L = grid.size();
  int evals = 0;
  constexpr int kMaxEvals = 9000;

  for (int round = 0; round < 200 && evals < kMaxEvals; ++round) {
    const Eigen::VectorXd& v = best.rho.values;
    auto is_high = [&](int l) { return std::abs(v[l] - cfg.beta) <= tol_pure; };
    auto is_low = [&](int l) { return std::abs(v[l] - cfg.alpha) <= tol_pure; };
    std::vector<int> shrink, grow;
    for (int l = 0; l < L; ++l) {
      const int prev = (l + L - 1) % L, next = (l + 1) % L;
      if (is_high(l) && (!is_high(prev) || !is_high(next))) shrink.push_back(l);
      if (is_low(l) && (is_high(prev) || is_high(next))) grow.push_back(l);
    }
    if (shrink.empty() || grow.empty() || shrink.size() * grow.size() > 600) break;

    // Phase A: all single swaps; take the best improving one.
    struct Single {
      double value;
      int i, j;
    };
    std::vector<Single> singles;
    singles.reserve(shrink.size() * grow.size());
    bool found = false;
    Polished round_best = best;
    for (int i : shrink) {
      for (int j : grow) {
        Density cand = best.rho;
        cand.values[i] = cfg.alpha;
        cand.values[j] = cfg.beta;
        Objective o = evaluate(basis, grid, cand, cfg);
        ++evals;
        singles.push_back({o.value, i, j});
        if (improves(o.value, round_best.obj.value, cfg.direction)) {
          round_best = {std::move(cand), std::move(o)};
          found = true;
        }
      }
    }
    if (found) {
      best = std::move(round_best);
      continue;
    }

    // Phase B: pairs of single swaps, tried most-promising-first. A
    // coordinated four-node rearrangement can descend where every single
    // swap is blocked (e.g. transferring width between two arcs while a
    // third stays put).
    std::sort(singles.begin(), singles.end(), [&](const Single& x, const Single& y) {
      return cfg.direction == Direction::Minimize ? x.value < y.value : x.value > y.value;
    });
    if (singles.size() > 60) singles.resize(60);
    for (std::size_t a = 0; a < singles.size() && !found; ++a) {
      for (std::size_t b = a + 1; b < singles.size() && !found; ++b) {
        if (singles[a].i == singles[b].i || singles[a].j == singles[b].j) continue;
        if (evals >= kMaxEvals) break;
        Density cand = best.rho;
        cand.values[singles[a].i] = cfg.alpha;
        cand.values[singles[a].j] = cfg.beta;
        cand.values[singles[b].i] = cfg.alpha;
        cand.values[singles[b].j] = cfg.beta;
        Objective o = evaluate(basis, grid, cand, cfg);
        ++evals;
        if (improves(o.value, best.obj.value, cfg.direction)) {
          best = {std::move(cand), std::move(o)};
          found = true;
        }
      }
    }
    if (!found) break;
  }
  return best;
}

OptimizationResult run_single(const BasisMatrices& basis, const BoundaryGrid& grid,
                              const OptimizationConfig& cfg, int restart) {
  Density rho = initial_density(grid, cfg, restart);
  Objective cur = evaluate(basis, grid, rho, cfg);

  OptimizationResult res;
  res.restart_index = restart;
  res.termination_reason = "max_iters";
  double step = cfg.step0;
  int stall_count = 0;

  const Direction linear_dir =
      cfg.direction == Direction::Minimize ? Direction::Maximize : Direction::Minimize;
  const double grad_sign = cfg.direction == Direction::Minimize ? 1.0 : -1.0;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const Eigen::VectorXd w_strict = strict_cluster_w(cur.spectrum, cfg);
    const ActiveCluster cluster = active_cluster(cur.spectrum, cfg, kActivationTol);

    const OptimalityReport rep = verify_optimality(rho, w_strict, grid, cfg.direction);
    res.iterates.push_back({iter, cur.value, step, rep.violation_measure});

    bool accepted = false;
    const double prev_value = cur.value;

    auto try_candidate = [&](const Density& cand) {
      Objective cand_obj = evaluate(basis, grid, cand, cfg);
      if (improves(cand_obj.value, cur.value, cfg.direction)) {
        rho = cand;
        cur = std::move(cand_obj);
        accepted = true;
      }
      return accepted;
    };

    // Candidate 0: cyclic symmetrization. When the iterate is close to an
    // m-fold symmetric configuration but the arcs are unevenly sized, the
    // coordinated multi-node transfer that evens them out is invisible to
    // single swaps and usually blocked for line searches. The Reynolds
    // average over the cyclic group of order m preserves the box and the
    // mass exactly and snaps the iterate onto the symmetric slice in one
    // move, so it is tried first, before other candidates can drift off
    // that slice.
    {
      const int m = count_arcs(rho);
      if (m >= 2 && grid.size() % m == 0) {
        const int shift = grid.size() / m;
        Eigen::VectorXd avg = Eigen::VectorXd::Zero(grid.size());
        for (int j = 0; j < m; ++j) {
          for (int l = 0; l < grid.size(); ++l) {
            avg[l] += rho.values[(l + j * shift) % grid.size()];
          }
        }
        avg /= static_cast<double>(m);
        Density sym = rho;
        sym.values = std::move(avg);
        try_candidate(sym);
      }
    }

    // Candidate 1: the bathtub fixed-point map on the cluster density w.
    // At the threshold-rule fixed point this reproduces rho and the loop
    // has already terminated; away from it, the jump often lands far ahead.
    if (!accepted && cfg.bathtub_every > 0 && iter % cfg.bathtub_every == 0) {
      try_candidate(
          bathtub_extremize(cluster.w, grid, cfg.alpha, cfg.beta, cfg.gamma, linear_dir).density);
    }

    // Candidate 2: projected gradient with backtracking on the true
    // objective. Two gradient flavors: the multiplicity group of lambda_k
    // (w_strict, the exact first-order direction) and the wider activation
    // cluster (cluster.w, better once modes have almost merged).
    const bool act_differs = (cluster.w - w_strict).cwiseAbs().maxCoeff() > 1e-14;
    for (int flavor = 0; flavor < (act_differs ? 2 : 1) && !accepted; ++flavor) {
      const Eigen::VectorXd& w_dir = flavor == 0 ? w_strict : cluster.w;
      double s = step;
      for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
        const Eigen::VectorXd raw = rho.values + grad_sign * s * cur.lambda_k * w_dir;
        if (try_candidate(project_to_admissible(raw, cfg.alpha, cfg.beta, cfg.gamma, grid))) {
          if (flavor == 0) step = s * cfg.step_grow;
          break;
        }
        s *= cfg.step_shrink;
      }
    }

    // Candidate 3: damped bathtub steps, for when the full jump overshoots
    // but the segment toward the fixed point still descends.
    if (!accepted && cfg.bathtub_every > 0 && iter % cfg.bathtub_every == 0) {
      const Density bt_rho =
          bathtub_extremize(cluster.w, grid, cfg.alpha, cfg.beta, cfg.gamma, linear_dir).density;
      const Eigen::VectorXd h_bt = bt_rho.values - rho.values;
      for (double theta : {0.5, 0.25, 0.125}) {
        if (try_candidate(combine(rho, h_bt, theta, grid))) break;
      }
    }

    // Rescue 1: minimax direction for a degenerate cluster, where moving
    // against the summed density w can still push the sorted lambda_k the
    // wrong way; the direction balances all active modes at once.
    if (!accepted && cluster.traces.cols() > 1) {
      const Eigen::VectorXd h = minimax_direction(rho, cluster, grid, cfg, kInnerIters);
      double theta = 1.0;
      for (int bt = 0; bt <= cfg.max_backtracks && !accepted; ++bt) {
        Density cand = combine(rho, h, theta, grid);
        Objective cand_obj = evaluate(basis, grid, cand, cfg);
        if (improves(cand_obj.value, cur.value, cfg.direction)) {
          rho = std::move(cand);
          cur = std::move(cand_obj);
          accepted = true;
        }
        theta *= 0.5;
      }
    }

    // Rescue 2: discrete endgame, seeded from the bathtub step function.
    // This also covers the degenerate fixed points of the threshold rule
    // (e.g. a constant density, whose cluster density w is itself constant):
    // the snap breaks the symmetry even when no continuous step does.
    if (!accepted) {
      Density snap =
          bathtub_extremize(cluster.w, grid, cfg.alpha, cfg.beta, cfg.gamma, linear_dir).density;
      Objective snap_obj = evaluate(basis, grid, snap, cfg);
      Polished polished = discrete_polish(basis, grid, cfg, snap, std::move(snap_obj));
      if (improves(polished.obj.value, cur.value, cfg.direction)) {
        rho = std::move(polished.rho);
        cur = std::move(polished.obj);
        accepted = true;
      }
    }

    // Termination: no candidate on the whole ladder improves. If the
    // threshold rule holds to tolerance this is a genuine stationary
    // configuration; otherwise the iteration stalled short of one.
    if (!accepted) {
      res.termination_reason = rep.violation_measure < cfg.tol_opt * grid.total_length
                                   ? "optimality"
                                   : "objective_stall";
      break;
    }

    if (std::abs(cur.value - prev_value) <= cfg.tol_obj * std::max(1.0, std::abs(prev_value))) {
      if (++stall_count >= cfg.stall_iters) {
        res.termination_reason = "objective_stall";
        break;
      }
    } else {
      stall_count = 0;
    }
  }

  res.density = rho;
  res.final_spectrum = std::move(cur.spectrum);
  res.lambda_k = cur.lambda_k;
  res.objective = cur.value;
  const auto group = eigenvalue_cluster(res.final_spectrum.eigenvalues, cfg.k, cfg.cluster_tol);
  res.multiplicity_at_opt = group.second - group.first + 1;
  res.final_optimality =
      verify_optimality(rho, strict_cluster_w(res.final_spectrum, cfg), grid, cfg.direction);
  return res;
}

OptimizationResult run_optimization(const BasisMatrices& basis, const BoundaryGrid& grid,
                                    OptimizationConfig cfg) {
  const int n = 2 * basis.k0 + 1;
  if (cfg.k < 1 || cfg.k + 1 > n) {
    throw std::invalid_argument("optimizer: k out of range for the basis");
  }
  const double perim = grid.total_length;

  // Degenerate box: the feasible set is the single constant density.
  if (cfg.beta - cfg.alpha <= 1e-14 * std::max(1.0, std::abs(cfg.beta))) {
    if (std::abs(cfg.gamma - cfg.alpha * perim) > 1e-9 * std::max(1.0, std::abs(cfg.gamma))) {
      throw std::invalid_argument("optimizer: degenerate box incompatible with gamma");
    }
    OptimizationResult res;
    res.density.values = Eigen::VectorXd::Constant(grid.size(), cfg.alpha);
    res.density.alpha = cfg.alpha;
    res.density.beta = cfg.beta;
    res.density.gamma = cfg.gamma;
    res.density.grid_fingerprint = grid.fingerprint();
    Objective obj = evaluate(basis, grid, res.density, cfg);
    res.objective = obj.value;
    res.lambda_k = obj.lambda_k;
    res.final_spectrum = std::move(obj.spectrum);
    const auto group =
        eigenvalue_cluster(res.final_spectrum.eigenvalues, cfg.k, cfg.cluster_tol);
    res.multiplicity_at_opt = group.second - group.first + 1;
    res.termination_reason = "singleton_feasible_set";
    return res;
  }

  if (!(cfg.alpha * perim < cfg.gamma && cfg.gamma < cfg.beta * perim)) {
    throw std::invalid_argument("optimizer: infeasible (alpha, beta, gamma)");
  }

  // Start portfolio: the configured start, then (for minimization) two
  // mode-beat seeds, then any remaining random restarts. The beat seeds are
  // derived from the constant admissible density, where the modes around
  // lambda_k are nearly degenerate: products of adjacent mode traces are the
  // leading splitting directions of the cluster, and snapping them to the box
  // yields bang-bang seeds that carry the natural arc count of the splitting.
  // Random starts reach the corresponding basin only by luck.
  std::vector<OptimizationConfig> starts;
  starts.push_back(cfg);
  const double c0 = cfg.gamma / perim;
  if (cfg.direction == Direction::Minimize && c0 > cfg.alpha && c0 < cfg.beta) {
    Density rho_c;
    rho_c.values = Eigen::VectorXd::Constant(grid.size(), c0);
    rho_c.alpha = cfg.alpha;
    rho_c.beta = cfg.beta;
    rho_c.gamma = cfg.gamma;
    rho_c.grid_fingerprint = grid.fingerprint();
    const Spectrum sp = solve_spectrum(basis, grid, rho_c, modes_needed(cfg, n));
    // A product of two traces mixes the sum and difference frequencies of the
    // pair. When lambda_k sits inside a degenerate pair (odd k on symmetric
    // domains) the pair product is already pure; when it straddles two pairs
    // (even k), one of the four-column combinations
    // u_{k-1} u_{k+1} -+ u_k u_{k+2} cancels the difference frequency exactly
    // for any orthogonal mixing of each pair. Which one depends on the
    // orientations the eigensolver happened to return, so both are formed and
    // the oscillation count decides.
    auto sign_changes = [](const Eigen::VectorXd& v) {
      int n_changes = 0;
      for (int l = 0; l < v.size(); ++l) {
        if (v[l] * v[(l + 1) % v.size()] < 0.0) ++n_changes;
      }
      return n_changes;
    };
    const bool straddles = cfg.k % 2 == 0;
    if (cfg.k + (straddles ? 2 : 1) < sp.size()) {
      Eigen::VectorXd beat;
      if (straddles) {
        const Eigen::VectorXd prod_a =
            sp.traces.col(cfg.k - 1).cwiseProduct(sp.traces.col(cfg.k + 1));
        const Eigen::VectorXd prod_b =
            sp.traces.col(cfg.k).cwiseProduct(sp.traces.col(cfg.k + 2));
        const Eigen::VectorXd diff = prod_a - prod_b;
        const Eigen::VectorXd sum = prod_a + prod_b;
        beat = sign_changes(sum) > sign_changes(diff) ? sum : diff;
      } else {
        beat = sp.traces.col(cfg.k).cwiseProduct(sp.traces.col(cfg.k + 1));
      }
      for (double s : {1.0, -1.0}) {
        OptimizationConfig seeded = cfg;
        seeded.init = InitKind::Values;
        seeded.init_values =
            bathtub_extremize(s * beat, grid, cfg.alpha, cfg.beta, cfg.gamma, Direction::Maximize)
                .density.values;
        starts.push_back(std::move(seeded));
      }
    }
  }
  if (cfg.init == InitKind::Random) {
    for (int r = 1; r < cfg.restarts; ++r) starts.push_back(cfg);
  }

  OptimizationResult best;
  bool have_best = false;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    OptimizationResult candidate = run_single(basis, grid, starts[r], static_cast<int>(r));
    // Basin kicks: blurring the step function re-opens continuous reshaping,
    // and the resumed run often re-sharpens into a better basin. A run that
    // already satisfies the threshold rule may still sit in the wrong basin
    // (the rule is necessary, not sufficient), so kicks apply to every run.
    for (double sigma : {4.0, 8.0, 16.0}) {
      OptimizationConfig kick_cfg = cfg;
      kick_cfg.init = InitKind::Values;
      kick_cfg.init_values = circular_blur(candidate.density.values, sigma);
      OptimizationResult retry = run_single(basis, grid, kick_cfg, static_cast<int>(r));
      if (improves(retry.objective, candidate.objective, cfg.direction)) {
        candidate = std::move(retry);
      }
    }
    if (!have_best || improves(candidate.objective, best.objective, cfg.direction)) {
      best = std::move(candidate);
      have_best = true;
    }
  }

  if (cfg.direction == Direction::Maximize && cfg.k >= 2) {
    const int width = min_high_arc_width(best.density);
    if (width > 0 && width < 4) best.termination_reason = "resolution_limited";
  }
  return best;
}

}  // namespace

OptimizationResult minimize_lambda_k(const BasisMatrices& basis, const BoundaryGrid& grid,
                                     const OptimizationConfig& config) {
  OptimizationConfig cfg = config;
  cfg.direction = Direction::Minimize;
  return run_optimization(basis, grid, cfg);
}

OptimizationResult maximize_lambda_k(const BasisMatrices& basis, const BoundaryGrid& grid,
                                     const OptimizationConfig& config) {
  OptimizationConfig cfg = config;
  cfg.direction = Direction::Maximize;
  return run_optimization(basis, grid, cfg);
}

}  // namespace steklov
