// SPDX-License-Identifier: Apache-2.0

#include "graphtv/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "graphtv/errors.hpp"
#include "graphtv/experiments.hpp"
#include "graphtv/graph.hpp"
#include "graphtv/serialize.hpp"
#include "graphtv/spectral.hpp"
#include "graphtv/tvsolver.hpp"

namespace graphtv {

namespace fs = std::filesystem;

namespace {

struct GraphArgs {
  std::string family;
  Index n = 0;
  int d = 0;
  Index side = 0;
  int k = 1;
  double degree = 0.0;
  double p = -1.0;
  std::uint64_t seed = 1;
  std::string edges;
  bool augmented = false;

  void attach(CLI::App* app) {
    app->add_option("--graph", family, "path|grid|hypercube|complete|star|cycle_power|erdos_renyi|random_regular|custom")
        ->required();
    app->add_option("--n", n, "number of vertices");
    app->add_option("--d", d, "grid or hypercube dimension");
    app->add_option("--side", side, "grid side length N");
    app->add_option("--k", k, "cycle power");
    app->add_option("--degree", degree, "expected (Erdos-Renyi) or exact (regular) degree");
    app->add_option("--p", p, "Erdos-Renyi edge probability (overrides --degree)");
    app->add_option("--seed", seed, "seed for random families");
    app->add_option("--edges", edges, "edge list file for --graph custom");
  }

  Json to_json() const {
    Json j;
    j["graph"] = family;
    j["n"] = n;
    j["d"] = d;
    j["side"] = side;
    j["k"] = k;
    j["degree"] = degree;
    j["p"] = p;
    j["seed"] = seed;
    j["edges"] = edges;
    j["augmented"] = augmented;
    return j;
  }

  Graph build() const {
    auto need = [](bool ok, const char* msg) {
      if (!ok) throw InvalidArgument(msg);
    };
    switch (family_kind_from_string(family)) {
      case FamilyKind::Path: need(n > 0, "--n is required"); return build_path(n);
      case FamilyKind::Grid: need(d > 0 && side > 0, "--d and --side are required"); return build_grid(d, side);
      case FamilyKind::Hypercube: need(d > 0, "--d is required"); return build_hypercube(d);
      case FamilyKind::Complete: need(n > 0, "--n is required"); return build_complete(n);
      case FamilyKind::Star: need(n > 0, "--n is required"); return build_star(n);
      case FamilyKind::CyclePower: need(n > 0, "--n is required"); return build_cycle_power(n, k);
      case FamilyKind::ErdosRenyi: {
        need(n > 1, "--n >= 2 is required");
        const double prob = p >= 0 ? p : degree / static_cast<double>(n - 1);
        need(prob > 0 && prob <= 1, "need --p in (0, 1] or a positive --degree");
        return build_erdos_renyi(n, prob, seed);
      }
      case FamilyKind::RandomRegular:
        need(n > 0 && degree > 0, "--n and --degree are required");
        return build_random_regular(n, static_cast<int>(std::lround(degree)), seed);
      case FamilyKind::Custom: {
        need(!edges.empty(), "--edges is required for a custom graph");
        std::ifstream in(edges);
        if (!in) throw InvalidArgument("cannot open edge list " + edges);
        return read_edge_list(in, n);
      }
    }
    throw InvalidArgument("unknown graph family");
  }
};

fs::path manifest_dir_for(const std::string& out) {
  if (out.empty() || out == "-") return fs::current_path();
  const fs::path parent = fs::path(out).parent_path();
  return parent.empty() ? fs::current_path() : parent;
}

void write_text(const fs::path& path, const std::string& text) {
  if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write " + path.string());
  f << text;
}

void write_manifest(const fs::path& dir, const Json& manifest) {
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

int cmd_spectral(const GraphArgs& ga, const std::string& method, const std::string& out_path, std::ostream& out) {
  SpectralReport report;
  if (ga.augmented) {
    if (family_kind_from_string(ga.family) != FamilyKind::Path || ga.n < 1)
      throw InvalidArgument("--augmented needs --graph path and --n");
    report = rho_dense(build_augmented_path(ga.n));
    report.family = "augmented_path";
  } else {
    const Graph g = ga.build();
    RhoMethod m = RhoMethod::Auto;
    if (method == "dense") m = RhoMethod::DensePseudoinverse;
    else if (method == "structured") m = RhoMethod::EigensumStructured;
    else if (method != "auto") m = rho_method_from_string(method);
    report = rho(g, m);
  }
  const std::string text = to_json(report).dump(2) + "\n";
  if (out_path.empty() || out_path == "-")
    out << text;
  else
    write_text(out_path, text);

  Json manifest;
  manifest["command"] = "spectral";
  manifest["graph"] = ga.to_json();
  manifest["method"] = method;
  manifest["out"] = out_path;
  write_manifest(manifest_dir_for(out_path), manifest);
  return kExitOk;
}

struct DenoiseArgs {
  std::string y_path;
  std::string out_path;
  double lambda = -1.0;
  std::string rule = "theorem_general";
  double sigma = 1.0;
  double delta = 0.1;
  double c = 1.0;
  std::string algorithm = "auto";
  double tol = 1e-6;
  int max_iter = 50000;
  std::string oracle;
};

int cmd_denoise(const GraphArgs& ga, const DenoiseArgs& da, std::ostream& out, std::ostream& err) {
  std::ifstream yin(da.y_path);
  if (!yin) throw InvalidArgument("cannot open observation file " + da.y_path);
  const Eigen::VectorXd y = read_vector(yin);
  const Graph g = ga.build();

  LambdaRule rule;
  rule.sigma = da.sigma;
  rule.delta = da.delta;
  rule.constant_c = da.c;
  double lam = da.lambda;
  std::optional<double> rho_value;
  if (lam < 0) {
    rule.rule = lambda_rule_from_string(da.rule);
    if (rule.rule == LambdaRuleKind::Manual) throw InvalidArgument("manual rule needs --lambda");
    if (rule.rule == LambdaRuleKind::TheoremGeneral) rho_value = rho(g).rho;
    lam = lambda_value(rule, g, rho_value);
  } else {
    rule.rule = LambdaRuleKind::Manual;
    rule.manual_value = lam;
  }

  DenoiseOptions opts;
  opts.algorithm = algorithm_from_string(da.algorithm);
  opts.tol = da.tol;
  opts.max_iter = da.max_iter;
  const DenoiseResult res = denoise(DenoiseProblem{g, y, lam}, opts);
  for (const auto& w : res.warnings) err << "warning: " << w << "\n";

  Json report;
  report["lambda"] = lam;
  report["lambda_rule"] = to_string(rule.rule);
  report["iterations"] = res.iterations;
  report["objective"] = res.objective;
  report["stationarity_residual"] = res.stationarity_residual;
  report["dual_feasibility"] = res.dual_feasibility;
  report["converged"] = res.converged;
  bool oracle_ok = true;
  if (!da.oracle.empty()) {
    if (da.oracle != "taut-string" && da.oracle != "taut_string") throw InvalidArgument("unknown oracle " + da.oracle);
    if (g.family().kind != FamilyKind::Path) throw InvalidArgument("the taut-string oracle needs --graph path");
    const double obj = tv_objective(g, y, lam, denoise_path_exact(y, lam));
    report["oracle_objective"] = obj;
    oracle_ok = std::abs(obj - res.objective) <= 1e-6 * (1.0 + std::abs(obj));
    report["oracle_agrees"] = oracle_ok;
  }

  std::ostringstream theta;
  write_vector(theta, res.theta_hat);
  if (da.out_path.empty() || da.out_path == "-") {
    out << theta.str();
    err << report.dump() << "\n";
  } else {
    write_text(da.out_path, theta.str());
    write_text(da.out_path + ".report.json", report.dump(2) + "\n");
  }

  Json manifest;
  manifest["command"] = "denoise";
  manifest["graph"] = ga.to_json();
  manifest["y"] = da.y_path;
  manifest["out"] = da.out_path;
  manifest["lambda"] = lam;
  manifest["lambda_rule"] = to_string(rule.rule);
  manifest["sigma"] = da.sigma;
  manifest["delta"] = da.delta;
  manifest["c"] = da.c;
  manifest["algorithm"] = da.algorithm;
  manifest["tol"] = da.tol;
  manifest["max_iter"] = da.max_iter;
  manifest["oracle"] = da.oracle;
  write_manifest(manifest_dir_for(da.out_path), manifest);
  return res.converged && oracle_ok ? kExitOk : kExitNumericalFailure;
}

std::string series_name(const ExperimentRecord& r) {
  return std::string(to_string(r.estimator)) + "_" + r.lambda_policy;
}

int cmd_experiment(const std::string& config_path, const std::string& preset_name, const std::string& out_dir,
                   unsigned threads, int trials_override, std::ostream& out) {
  if (config_path.empty() == preset_name.empty()) throw InvalidArgument("give exactly one of --config or --preset");
  std::vector<ExperimentConfig> configs;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw InvalidArgument("cannot open config " + config_path);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    configs = experiment_configs_from_json(j);
  } else {
    configs = preset(preset_name);
  }
  if (trials_override > 0)
    for (auto& c : configs) c.trials = trials_override;
  std::set<std::string> names;
  for (const auto& c : configs)
    if (!names.insert(c.name).second) throw InvalidArgument("duplicate experiment name '" + c.name + "'");

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  Json manifest;
  manifest["experiments"] = Json::array();
  for (const auto& c : configs) manifest["experiments"].push_back(to_json(c));
  write_manifest(dir, manifest);

  std::vector<ExperimentRecord> all;
  Json fits;
  bool all_converged = true;
  for (const auto& cfg : configs) {
    const auto records = run_experiment(cfg, threads);
    std::map<std::string, std::vector<ExperimentRecord>> series;
    for (const auto& r : records) {
      series[series_name(r)].push_back(r);
      all_converged = all_converged && r.converged;
    }
    Json fit_json;
    for (const auto& [name, recs] : series) {
      std::ostringstream tsv;
      if (!cfg.kl_grid.empty()) {
        const auto kl = kl_linearity_check(recs);
        write_plot_tsv(tsv, kl.points);
        fit_json[name] = {{"kl_correlation", kl.defined ? Json(kl.correlation) : Json(nullptr)},
                          {"defined", kl.defined}};
      } else {
        write_plot_tsv(tsv, mean_by_n(recs));
        if (cfg.sweep.size() >= 2) {
          try {
            fit_json[name] = to_json(fit_rate(recs, cfg.fit_model));
          } catch (const InvalidArgument& e) {
            fit_json[name] = {{"error", e.what()}};
          }
        }
      }
      write_text(dir / (cfg.name + "__" + name + ".tsv"), tsv.str());
    }
    write_text(dir / (cfg.name + "__fit.json"), fit_json.dump(2) + "\n");
    fits[cfg.name] = fit_json;
    all.insert(all.end(), records.begin(), records.end());
    out << cfg.name << ": " << records.size() << " records\n";
  }

  std::ostringstream csv;
  write_records_csv(csv, all);
  write_text(dir / "records.csv", csv.str());
  write_text(dir / "records.json", records_to_json(all).dump(1) + "\n");
  return all_converged ? kExitOk : kExitNumericalFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph total variation denoising toolkit", "graphtv"};
  app.require_subcommand(1);

  GraphArgs spectral_graph;
  std::string method = "auto";
  std::string spectral_out;
  auto* spectral = app.add_subcommand("spectral", "rho, kappa bound and spectral gap of a graph");
  spectral_graph.attach(spectral);
  spectral->add_option("--method", method, "auto|dense|structured");
  spectral->add_flag("--augmented", spectral_graph.augmented, "path only: use the square augmented incidence matrix");
  spectral->add_option("--out", spectral_out, "report file (default: stdout)");

  GraphArgs denoise_graph;
  DenoiseArgs da;
  auto* den = app.add_subcommand("denoise", "TV denoising of a vector on a graph");
  denoise_graph.attach(den);
  den->add_option("--y", da.y_path, "observation file, one number per line")->required();
  den->add_option("--lambda", da.lambda, "explicit lambda (overrides --lambda-rule)");
  den->add_option("--lambda-rule", da.rule, "theorem_general|grid2d|grid_high_dim|hypercube|complete|star|random_gap|cycle_power");
  den->add_option("--sigma", da.sigma, "noise level for the rule");
  den->add_option("--delta", da.delta, "confidence parameter for the rule");
  den->add_option("--c", da.c, "rule constant");
  den->add_option("--algorithm", da.algorithm, "auto|parametric_cut|complete_isotonic|primal_dual");
  den->add_option("--tol", da.tol, "certificate tolerance");
  den->add_option("--max-iter", da.max_iter, "iteration cap for primal_dual");
  den->add_option("--oracle", da.oracle, "taut-string: cross-check a path instance");
  den->add_option("--out", da.out_path, "theta file (default: stdout)");

  std::string config_path, preset_name, out_dir = "out";
  unsigned threads = 0;
  int trials = 0;
  auto* exp = app.add_subcommand("experiment", "Monte Carlo experiments");
  exp->add_option("--config", config_path, "experiment JSON (a manifest.json works too)");
  exp->add_option("--preset", preset_name, "island-fig2|island-fig3|holder-2d|cartoon-2d|isotonic-2d");
  exp->add_option("--out", out_dir, "output directory");
  exp->add_option("--threads", threads, "worker threads (0 = all cores); output does not depend on it");
  exp->add_option("--trials", trials, "override the trial count");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidArgument;
  }

  try {
    if (spectral->parsed()) return cmd_spectral(spectral_graph, method, spectral_out, out);
    if (den->parsed()) return cmd_denoise(denoise_graph, da, out, err);
    return cmd_experiment(config_path, preset_name, out_dir, threads, trials, out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidArgument;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const GenerationFailure& e) {
    err << "generation failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidArgument;
  }
}

}  // namespace graphtv
