#include "steklov/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steklov/bathtub.hpp"
#include "steklov/boundary_grid.hpp"
#include "steklov/cluster_gradient.hpp"
#include "steklov/convexity.hpp"
#include "steklov/density.hpp"
#include "steklov/dirichlet1d.hpp"
#include "steklov/harmonic_basis.hpp"
#include "steklov/io.hpp"
#include "steklov/mobius.hpp"
#include "steklov/optimizer.hpp"
#include "steklov/spectrum.hpp"
#include "steklov/util.hpp"

namespace steklov {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kToolVersion = "1.0.0";

/// Configuration problems map to exit code 2; numerical ones to 3.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonArgs {
  std::string config_path;
  std::string out_override;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
};

struct RunContext {
  json config;
  fs::path out_dir;
  std::uint64_t seed = 12345;
  int workers = 1;
  std::string subcommand;
  std::string config_path;
  std::map<std::string, std::string> input_fingerprints;
  std::map<std::string, std::string> output_hashes;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  fs::path out(const std::string& name) const { return out_dir / name; }
  void record_output(const std::string& name) {
    output_hashes[name] = file_content_hash((out_dir / name).string());
  }
  void finish_manifest() {
    json m;
    m["subcommand"] = subcommand;
    m["config_path"] = config_path;
    m["output_dir"] = out_dir.string();
    m["seed"] = seed;
    m["tool_version"] = kToolVersion;
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    m["wall_time_seconds"] = wall;
    m["input_fingerprints"] = input_fingerprints;
    m["outputs"] = output_hashes;
    std::ofstream out(out_dir / "manifest.json");
    out << m.dump(2) << '\n';
  }
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  return j;
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

json section(const json& j, const std::string& key) {
  return j.contains(key) ? j.at(key) : json::object();
}

BoundaryGrid make_grid(const json& config) {
  const json geo = section(config, "geometry");
  const std::string type = get_or<std::string>(geo, "type", "unit_disk");
  const int L = get_or<int>(geo, "L", 720);
  if (type == "unit_disk") return make_unit_disk_grid(L);
  if (type == "polar_graph") {
    if (!geo.contains("radius_terms")) {
      throw ConfigError("polar_graph geometry requires radius_terms");
    }
    const std::vector<double> c = geo.at("radius_terms").get<std::vector<double>>();
    if (c.empty()) throw ConfigError("radius_terms must be nonempty");
    auto radius = [c](double theta) {
      double r = c[0];
      for (std::size_t m = 1; m < c.size(); ++m) r += c[m] * std::cos(static_cast<double>(m) * theta);
      return r;
    };
    auto radius_deriv = [c](double theta) {
      double d = 0.0;
      for (std::size_t m = 1; m < c.size(); ++m) {
        d -= c[m] * static_cast<double>(m) * std::sin(static_cast<double>(m) * theta);
      }
      return d;
    };
    return make_polar_graph_grid(radius, radius_deriv, L);
  }
  throw ConfigError("unknown geometry type: " + type);
}

int config_k0(const json& config) { return get_or<int>(section(config, "geometry"), "k0", 18); }

struct BoxParams {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

BoxParams box_params(const json& config) {
  const json d = section(config, "density");
  BoxParams b;
  b.alpha = get_or<double>(d, "alpha", 0.5);
  b.beta = get_or<double>(d, "beta", 1.5);
  b.gamma = get_or<double>(d, "gamma", kTwoPi);
  return b;
}

Direction parse_direction(const std::string& s) {
  if (s == "min" || s == "minimize") return Direction::Minimize;
  if (s == "max" || s == "maximize") return Direction::Maximize;
  throw ConfigError("direction must be min or max, got: " + s);
}

std::vector<std::pair<double, double>> parse_arcs(const json& arr) {
  std::vector<std::pair<double, double>> arcs;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2) {
      throw ConfigError("each arc must be a [start, end] pair");
    }
    arcs.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
  }
  return arcs;
}

OptimizationConfig optimizer_config(const RunContext& ctx, Direction direction) {
  const json& config = ctx.config;
  const json prob = section(config, "problem");
  const json opt = section(config, "optimizer");
  const BoxParams box = box_params(config);

  OptimizationConfig cfg;
  cfg.k = get_or<int>(prob, "k", 1);
  cfg.direction = direction;
  cfg.j_guard = get_or<int>(prob, "j_guard", 5);
  cfg.alpha = box.alpha;
  cfg.beta = box.beta;
  cfg.gamma = box.gamma;
  cfg.max_iters = get_or<int>(opt, "max_iters", cfg.max_iters);
  cfg.step0 = get_or<double>(opt, "step0", cfg.step0);
  cfg.step_shrink = get_or<double>(opt, "step_shrink", cfg.step_shrink);
  cfg.step_grow = get_or<double>(opt, "step_grow", cfg.step_grow);
  cfg.max_backtracks = get_or<int>(opt, "max_backtracks", cfg.max_backtracks);
  cfg.tol_obj = get_or<double>(opt, "tol_obj", cfg.tol_obj);
  cfg.stall_iters = get_or<int>(opt, "stall_iters", cfg.stall_iters);
  cfg.tol_opt = get_or<double>(opt, "tol_opt", cfg.tol_opt);
  cfg.cluster_tol = get_or<double>(opt, "cluster_tol", cfg.cluster_tol);
  cfg.bathtub_every = get_or<int>(opt, "bathtub_every", cfg.bathtub_every);
  cfg.restarts = get_or<int>(opt, "restarts", cfg.restarts);
  cfg.seed = ctx.seed;

  const std::string init = get_or<std::string>(opt, "init", "random");
  if (init == "constant") {
    cfg.init = InitKind::Constant;
  } else if (init == "random") {
    cfg.init = InitKind::Random;
  } else if (init == "bang_bang") {
    cfg.init = InitKind::BangBang;
    if (!opt.contains("init_arcs")) throw ConfigError("init=bang_bang requires init_arcs");
    cfg.init_arcs = parse_arcs(opt.at("init_arcs"));
  } else {
    throw ConfigError("unknown optimizer init: " + init);
  }
  if (cfg.tol_obj <= 0.0 || cfg.tol_opt <= 0.0 || cfg.j_guard < 1) {
    throw ConfigError("optimizer tolerances must be positive and j_guard >= 1");
  }
  return cfg;
}

Density density_from_spec(const json& spec, const BoundaryGrid& grid, const BoxParams& box) {
  const std::string kind = get_or<std::string>(spec, "kind", "constant");
  if (kind == "constant") {
    const double value = get_or<double>(spec, "value", box.gamma / grid.total_length);
    Density d;
    d.values = Eigen::VectorXd::Constant(grid.size(), value);
    d.alpha = value;
    d.beta = value;
    d.gamma = value * grid.total_length;
    d.grid_fingerprint = grid.fingerprint();
    return d;
  }
  if (kind == "bang_bang") {
    if (!spec.contains("arcs")) throw ConfigError("bang_bang density requires arcs");
    return make_bang_bang(parse_arcs(spec.at("arcs")), box.alpha, box.beta, grid);
  }
  if (kind == "mobius") {
    MobiusParams p;
    p.a_modulus = get_or<double>(spec, "r", 0.0);
    p.a_phase = get_or<double>(spec, "eta", 0.0);
    return mobius_density(p, grid);
  }
  if (kind == "file") {
    if (!spec.contains("path")) throw ConfigError("file density requires path");
    return read_density_csv(spec.at("path").get<std::string>(), grid, box.alpha, box.beta,
                            box.gamma);
  }
  throw ConfigError("unknown density kind: " + kind);
}

void echo_config(RunContext& ctx) {
  std::ofstream out(ctx.out("config.json"));
  out << ctx.config.dump(2) << '\n';
  out.close();
  ctx.record_output("config.json");
}

void write_spectrum_artifacts(RunContext& ctx, const Spectrum& sp, const BoundaryGrid& grid) {
  write_traces_csv(sp, grid, ctx.out("traces.csv").string());
  ctx.record_output("traces.csv");
  write_spectrum_json(sp, "traces.csv", ctx.out("spectrum.json").string());
  ctx.record_output("spectrum.json");
}

Density load_input_density(RunContext& ctx, const BoundaryGrid& grid, const BoxParams& box) {
  if (ctx.config.contains("density_file")) {
    const std::string path = ctx.config.at("density_file").get<std::string>();
    ctx.input_fingerprints["density_file"] = file_content_hash(path);
    return read_density_csv(path, grid, box.alpha, box.beta, box.gamma);
  }
  if (ctx.config.contains("density_spec")) {
    return density_from_spec(ctx.config.at("density_spec"), grid, box);
  }
  // Default: the constant density with mass gamma.
  Density d;
  d.values = Eigen::VectorXd::Constant(grid.size(), box.gamma / grid.total_length);
  d.alpha = box.alpha;
  d.beta = box.beta;
  d.gamma = box.gamma;
  d.grid_fingerprint = grid.fingerprint();
  return d;
}

int run_solve(RunContext& ctx) {
  const BoundaryGrid grid = make_grid(ctx.config);
  const BasisMatrices basis = assemble_basis(grid, config_k0(ctx.config));
  const BoxParams box = box_params(ctx.config);
  const Density rho = load_input_density(ctx, grid, box);
  const int n_default = std::min(2 * basis.k0 + 1, 19);
  const int n_eigs = get_or<int>(ctx.config, "n_eigs", n_default);

  const Spectrum sp = solve_spectrum(basis, grid, rho, n_eigs);
  echo_config(ctx);
  write_density_csv(rho, grid, ctx.out("density.csv").string());
  ctx.record_output("density.csv");
  write_spectrum_artifacts(ctx, sp, grid);
  ctx.finish_manifest();
  return 0;
}

int run_optimize(RunContext& ctx, Direction direction) {
  const BoundaryGrid grid = make_grid(ctx.config);
  const BasisMatrices basis = assemble_basis(grid, config_k0(ctx.config));
  const OptimizationConfig cfg = optimizer_config(ctx, direction);

  const OptimizationResult res = direction == Direction::Minimize
                                     ? minimize_lambda_k(basis, grid, cfg)
                                     : maximize_lambda_k(basis, grid, cfg);

  echo_config(ctx);
  write_density_csv(res.density, grid, ctx.out("density.csv").string());
  ctx.record_output("density.csv");
  write_spectrum_artifacts(ctx, res.final_spectrum, grid);
  for (int j = 0; j < res.final_spectrum.size(); ++j) {
    const std::string name = "trace_" + std::to_string(j) + ".csv";
    write_scalar_csv(grid, res.final_spectrum.traces.col(j), "u", ctx.out(name).string());
    ctx.record_output(name);
  }
  write_history_csv(res.iterates, ctx.out("history.csv").string());
  ctx.record_output("history.csv");
  write_optimality_json(res.final_optimality, ctx.out("optimality_report.json").string());
  ctx.record_output("optimality_report.json");

  json summary;
  summary["objective"] = format_double(res.objective);
  summary["lambda_k"] = format_double(res.lambda_k);
  summary["k"] = cfg.k;
  summary["direction"] = direction == Direction::Minimize ? "min" : "max";
  summary["multiplicity_at_opt"] = res.multiplicity_at_opt;
  summary["termination_reason"] = res.termination_reason;
  summary["iterations"] = res.iterates.size();
  summary["restart_index"] = res.restart_index;
  summary["arc_count"] = count_arcs(res.density);
  {
    std::ofstream out(ctx.out("result.json"));
    out << summary.dump(2) << '\n';
  }
  ctx.record_output("result.json");
  ctx.finish_manifest();
  return 0;
}

int run_probe(RunContext& ctx) {
  const BoundaryGrid grid = make_grid(ctx.config);
  const BasisMatrices basis = assemble_basis(grid, config_k0(ctx.config));
  const BoxParams box = box_params(ctx.config);
  const json probe = section(ctx.config, "probe");
  if (!probe.contains("rho_a") || !probe.contains("rho_b")) {
    throw ConfigError("probe requires rho_a and rho_b density specs");
  }
  const Density rho_a = density_from_spec(probe.at("rho_a"), grid, box);
  const Density rho_b = density_from_spec(probe.at("rho_b"), grid, box);
  const std::vector<int> k_list =
      get_or<std::vector<int>>(probe, "k_list", std::vector<int>{1, 2, 3, 4});
  const int n_t = get_or<int>(probe, "n_t", 11);
  const double tol_curv = get_or<double>(probe, "tol_curv", -1.0);

  const ConvexityProbeResult res =
      convexity_probe(basis, grid, rho_a, rho_b, k_list, n_t, tol_curv, ctx.workers);

  echo_config(ctx);
  {
    std::ofstream out(ctx.out("probe.csv"));
    out << "t";
    for (int k : k_list) out << ",lambda_" << k;
    for (int k : k_list) out << ",inv_lambda_" << k;
    out << '\n';
    for (int i = 0; i < res.t_values.size(); ++i) {
      out << format_double(res.t_values[i]);
      for (int j = 0; j < res.lambdas.cols(); ++j) out << ',' << format_double(res.lambdas(i, j));
      for (int j = 0; j < res.inv_lambdas.cols(); ++j) {
        out << ',' << format_double(res.inv_lambdas(i, j));
      }
      out << '\n';
    }
  }
  ctx.record_output("probe.csv");

  json cls;
  for (std::size_t j = 0; j < k_list.size(); ++j) {
    cls["lambda_" + std::to_string(k_list[j])] = res.lambda_class[j].label();
    cls["inv_lambda_" + std::to_string(k_list[j])] = res.inv_lambda_class[j].label();
  }
  {
    std::ofstream out(ctx.out("classifications.json"));
    out << cls.dump(2) << '\n';
  }
  ctx.record_output("classifications.json");
  ctx.finish_manifest();
  return 0;
}

int run_mobius(RunContext& ctx) {
  const BoundaryGrid grid = make_grid(ctx.config);
  const BasisMatrices basis = assemble_basis(grid, config_k0(ctx.config));
  const json mob = section(ctx.config, "mobius");
  const std::vector<double> r_values =
      get_or<std::vector<double>>(mob, "r_values", std::vector<double>{0.1, 0.3, 0.5});
  const double eta = get_or<double>(mob, "eta", 0.0);
  const double cluster_tol = get_or<double>(mob, "cluster_tol", 1e-4);

  echo_config(ctx);
  json report = json::array();
  for (std::size_t i = 0; i < r_values.size(); ++i) {
    MobiusParams p;
    p.a_modulus = r_values[i];
    p.a_phase = eta;
    const Density rho = mobius_density(p, grid);
    const std::string name = "mobius_rho_" + std::to_string(i) + ".csv";
    write_density_csv(rho, grid, ctx.out(name).string());
    ctx.record_output(name);
    const MobiusReport rep = validate_mobius_maximizer(p, basis, grid, cluster_tol);
    json entry;
    entry["r"] = format_double(r_values[i]);
    entry["eta"] = format_double(eta);
    entry["mass"] = format_double(rho.gamma);
    entry["lambda1_gamma"] = format_double(rep.lambda1_gamma);
    entry["deviation_from_2pi"] = format_double(rep.deviation_from_2pi);
    entry["multiplicity"] = rep.multiplicity;
    report.push_back(entry);
  }
  {
    std::ofstream out(ctx.out("mobius_report.json"));
    out << report.dump(2) << '\n';
  }
  ctx.record_output("mobius_report.json");
  ctx.finish_manifest();
  return 0;
}

int run_dirichlet1d(RunContext& ctx) {
  const json d1 = section(ctx.config, "dirichlet1d");
  const double alpha = get_or<double>(d1, "alpha", 1.0);
  const double beta = get_or<double>(d1, "beta", 2.0);
  const std::string path_kind = get_or<std::string>(d1, "path", "half_split");
  const std::vector<int> k_list =
      get_or<std::vector<int>>(d1, "k_list", std::vector<int>{1, 2, 3, 4});
  const int n_t = get_or<int>(d1, "n_t", 33);
  const double tol_curv = get_or<double>(d1, "tol_curv", -1.0);

  std::function<PiecewiseDensity1D(double)> path;
  if (path_kind == "half_split") {
    path = half_split_path(alpha, beta);
  } else if (path_kind == "quarter_split") {
    path = quarter_split_path(alpha, beta);
  } else {
    throw ConfigError("dirichlet1d path must be half_split or quarter_split");
  }

  const Dirichlet1DProbe res = classify_path_convexity(path, k_list, n_t, tol_curv, ctx.workers);

  echo_config(ctx);
  {
    std::ofstream out(ctx.out("dirichlet_path.csv"));
    out << "t";
    for (int k : k_list) out << ",mu_" << k;
    for (int k : k_list) out << ",inv_mu_" << k;
    out << '\n';
    for (int i = 0; i < res.t_values.size(); ++i) {
      out << format_double(res.t_values[i]);
      for (int j = 0; j < res.mus.cols(); ++j) out << ',' << format_double(res.mus(i, j));
      for (int j = 0; j < res.inv_mus.cols(); ++j) out << ',' << format_double(res.inv_mus(i, j));
      out << '\n';
    }
  }
  ctx.record_output("dirichlet_path.csv");

  json cls;
  for (std::size_t j = 0; j < k_list.size(); ++j) {
    cls["mu_" + std::to_string(k_list[j])] = res.mu_class[j].label();
    cls["inv_mu_" + std::to_string(k_list[j])] = res.inv_mu_class[j].label();
  }
  {
    std::ofstream out(ctx.out("dirichlet_classification.json"));
    out << cls.dump(2) << '\n';
  }
  ctx.record_output("dirichlet_classification.json");
  ctx.finish_manifest();
  return 0;
}

int run_verify(RunContext& ctx) {
  const BoundaryGrid grid = make_grid(ctx.config);
  const BasisMatrices basis = assemble_basis(grid, config_k0(ctx.config));
  const BoxParams box = box_params(ctx.config);
  const json prob = section(ctx.config, "problem");
  const int k = get_or<int>(prob, "k", 1);
  const Direction direction = parse_direction(get_or<std::string>(prob, "direction", "min"));
  const double cluster_tol = get_or<double>(prob, "cluster_tol", 1e-6);
  const Density rho = load_input_density(ctx, grid, box);

  const int n_eigs = std::min(2 * basis.k0 + 1, k + 7);
  const Spectrum sp = solve_spectrum(basis, grid, rho, n_eigs);
  const ClusterGradient grad = cluster_gradient(sp, rho, k, cluster_tol);
  const OptimalityReport rep = verify_optimality(rho, grad.w, grid, direction);

  echo_config(ctx);
  write_density_csv(rho, grid, ctx.out("density.csv").string());
  ctx.record_output("density.csv");
  write_scalar_csv(grid, grad.w, "w", ctx.out("w.csv").string());
  ctx.record_output("w.csv");
  write_optimality_json(rep, ctx.out("optimality_report.json").string());
  ctx.record_output("optimality_report.json");
  ctx.finish_manifest();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Weighted Steklov eigenvalues and extremal boundary densities"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"solve", "spectrum of a given boundary density"},
      {"minimize", "minimize lambda_k * gamma over the admissible densities"},
      {"maximize", "maximize lambda_k * gamma over the admissible densities"},
      {"probe", "eigenvalue curvature along a density segment"},
      {"mobius", "conformal maximizer family report"},
      {"dirichlet1d", "1D Dirichlet eigenvalues on a piecewise-constant density path"},
      {"verify", "first-order optimality report for a density file"}};
  for (const auto& [name, blurb] : commands) {
    CLI::App* sub = app.add_subcommand(name, blurb);
    sub->add_option("--config", args.config_path, "path to the JSON configuration")->required();
    sub->add_option("--out", args.out_override, "output directory (overrides config)");
    sub->add_option("--seed", args.seed, "random seed (overrides config)")
        ->each([&args](const std::string&) { args.seed_given = true; });
    sub->add_option("--workers", args.workers, "worker threads for parameter sweeps");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunContext ctx;
  try {
    ctx.subcommand = app.get_subcommands().front()->get_name();
    ctx.config_path = args.config_path;
    ctx.config = load_config(args.config_path);
    ctx.input_fingerprints["config"] = file_content_hash(args.config_path);
    ctx.seed = args.seed_given ? args.seed : get_or<std::uint64_t>(ctx.config, "seed", 12345);
    ctx.workers = args.workers;
    const std::string out_dir = !args.out_override.empty()
                                    ? args.out_override
                                    : get_or<std::string>(ctx.config, "output_dir", "out");
    ctx.out_dir = out_dir;
    fs::create_directories(ctx.out_dir);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (ctx.subcommand == "solve") return run_solve(ctx);
    if (ctx.subcommand == "minimize") return run_optimize(ctx, Direction::Minimize);
    if (ctx.subcommand == "maximize") return run_optimize(ctx, Direction::Maximize);
    if (ctx.subcommand == "probe") return run_probe(ctx);
    if (ctx.subcommand == "mobius") return run_mobius(ctx);
    if (ctx.subcommand == "dirichlet1d") return run_dirichlet1d(ctx);
    if (ctx.subcommand == "verify") return run_verify(ctx);
    std::cerr << "unknown subcommand: " << ctx.subcommand << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    json diag;
    diag["error"] = e.what();
    diag["subcommand"] = ctx.subcommand;
    std::cerr << diag.dump(2) << '\n';
    std::ofstream out(ctx.out_dir / "error.json");
    if (out) out << diag.dump(2) << '\n';
    return 3;
  }
}

}  // namespace steklov
