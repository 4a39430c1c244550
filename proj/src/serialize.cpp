// SPDX-License-Identifier: Apache-2.0

#include "graphtv/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "graphtv/errors.hpp"

namespace graphtv {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const SpectralReport& report) {
  Json j;
  j["n"] = report.graph_n;
  j["m"] = report.graph_m;
  j["rho"] = report.rho;
  j["rho_method"] = to_string(report.rho_method);
  if (report.spectral_gap)
    j["lambda2"] = *report.spectral_gap;
  else
    j["lambda2"] = nullptr;
  j["kappa_lower_bound"] = report.kappa_lower_bound;
  j["family"] = report.family;
  return j;
}

namespace {

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& what) {
  if (!j.is_object()) throw InvalidArgument(what + " must be a JSON object");
  std::set<std::string> names(known.begin(), known.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!names.count(it.key())) throw InvalidArgument("unknown field '" + it.key() + "' in " + what);
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const SignalSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case SignalKind::Island:
      j["k"] = spec.k;
      j["l"] = spec.l;
      break;
    case SignalKind::Holder:
    case SignalKind::Cartoon:
      j["shape"] = spec.shape;
      j["alpha"] = spec.alpha;
      j["L"] = spec.L;
      j["dim"] = spec.dim;
      break;
    case SignalKind::BiIsotonic:
      j["variation_sqrt"] = spec.variation_sqrt;
      j["dim"] = spec.dim;
      break;
    case SignalKind::Custom: j["values"] = spec.values; break;
  }
  return j;
}

SignalSpec signal_spec_from_json(const Json& j) {
  reject_unknown(j, {"kind", "k", "l", "alpha", "L", "shape", "variation_sqrt", "seed", "dim", "side", "values"},
                 "signal");
  SignalSpec spec;
  std::string kind = to_string(spec.kind);
  read(j, "kind", kind);
  spec.kind = signal_kind_from_string(kind);
  if (spec.kind == SignalKind::Cartoon) spec.shape = "pc_disk";
  read(j, "k", spec.k);
  read(j, "l", spec.l);
  read(j, "alpha", spec.alpha);
  read(j, "L", spec.L);
  read(j, "shape", spec.shape);
  read(j, "variation_sqrt", spec.variation_sqrt);
  read(j, "seed", spec.seed);
  read(j, "dim", spec.dim);
  read(j, "side", spec.side);
  read(j, "values", spec.values);
  return spec;
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["name"] = cfg.name;
  j["family"] = to_string(cfg.family);
  j["dim"] = cfg.dim;
  j["degree"] = cfg.degree;
  j["power"] = cfg.power;
  j["sweep"] = cfg.sweep;
  j["signal"] = to_json(cfg.signal);
  Json kl = Json::array();
  for (auto [k, l] : cfg.kl_grid) kl.push_back({k, l});
  j["kl_grid"] = kl;
  j["sigma"] = cfg.sigma;
  j["trials"] = cfg.trials;
  Json est = Json::array();
  for (auto e : cfg.estimators) est.push_back(to_string(e));
  j["estimators"] = est;
  Json pol = Json::array();
  for (auto p : cfg.policies) pol.push_back(to_string(p));
  j["policies"] = pol;
  j["lambda_rule"] = to_string(cfg.rule.value_or(default_lambda_rule(cfg.family, cfg.dim)));
  j["delta"] = cfg.delta;
  j["constant_c"] = cfg.constant_c;
  j["manual_lambda"] = cfg.manual_lambda;
  j["beta"] = cfg.beta;
  j["start_multiplier"] = cfg.start_multiplier;
  j["oracle_cap"] = cfg.oracle_cap;
  j["tol"] = cfg.tol;
  j["certify"] = cfg.certify;
  j["master_seed"] = cfg.master_seed;
  j["fit_model"] = to_string(cfg.fit_model);
  return j;
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  reject_unknown(j,
                 {"name", "family", "dim", "degree", "power", "sweep", "signal", "kl_grid", "sigma", "trials",
                  "estimators", "policies", "lambda_rule", "delta", "constant_c", "manual_lambda", "beta",
                  "start_multiplier", "oracle_cap", "tol", "certify", "master_seed", "fit_model"},
                 "experiment config");
  ExperimentConfig cfg;
  read(j, "name", cfg.name);
  std::string family = to_string(cfg.family);
  read(j, "family", family);
  cfg.family = family_kind_from_string(family);
  read(j, "dim", cfg.dim);
  read(j, "degree", cfg.degree);
  read(j, "power", cfg.power);
  read(j, "sweep", cfg.sweep);
  if (j.contains("signal")) cfg.signal = signal_spec_from_json(j.at("signal"));
  if (j.contains("kl_grid")) {
    cfg.kl_grid.clear();
    for (const auto& p : j.at("kl_grid")) {
      if (!p.is_array() || p.size() != 2) throw InvalidArgument("kl_grid entries must be [k, l] pairs");
      cfg.kl_grid.emplace_back(p[0].get<int>(), p[1].get<int>());
    }
  }
  read(j, "sigma", cfg.sigma);
  read(j, "trials", cfg.trials);
  if (j.contains("estimators")) {
    cfg.estimators.clear();
    for (const auto& e : j.at("estimators")) cfg.estimators.push_back(estimator_from_string(e.get<std::string>()));
  }
  if (j.contains("policies")) {
    cfg.policies.clear();
    for (const auto& p : j.at("policies")) cfg.policies.push_back(lambda_policy_from_string(p.get<std::string>()));
  }
  if (j.contains("lambda_rule")) {
    const auto name = j.at("lambda_rule").get<std::string>();
    if (name != "auto") cfg.rule = lambda_rule_from_string(name);
  }
  read(j, "delta", cfg.delta);
  read(j, "constant_c", cfg.constant_c);
  read(j, "manual_lambda", cfg.manual_lambda);
  read(j, "beta", cfg.beta);
  read(j, "start_multiplier", cfg.start_multiplier);
  read(j, "oracle_cap", cfg.oracle_cap);
  read(j, "tol", cfg.tol);
  read(j, "certify", cfg.certify);
  read(j, "master_seed", cfg.master_seed);
  std::string fit = to_string(cfg.fit_model);
  read(j, "fit_model", fit);
  cfg.fit_model = fit_model_from_string(fit);
  validate(cfg);
  return cfg;
}

std::vector<ExperimentConfig> experiment_configs_from_json(const Json& j) {
  std::vector<ExperimentConfig> out;
  if (j.is_object() && j.contains("experiments")) {
    if (j.size() != 1) throw InvalidArgument("an experiment list must be the only top-level field");
    for (const auto& e : j.at("experiments")) out.push_back(experiment_config_from_json(e));
  } else {
    out.push_back(experiment_config_from_json(j));
  }
  if (out.empty()) throw InvalidArgument("no experiments given");
  return out;
}

namespace {

ExperimentConfig island(const std::string& name, FamilyKind family, double degree) {
  ExperimentConfig cfg;
  cfg.name = name;
  cfg.family = family;
  cfg.degree = degree;
  cfg.sweep = {100, 200, 400, 800};
  cfg.signal.kind = SignalKind::Island;
  cfg.signal.k = 3;
  cfg.signal.l = 3;
  cfg.sigma = 0.5;
  cfg.trials = 50;
  cfg.policies = {LambdaPolicyKind::Theoretical, LambdaPolicyKind::Oracle};
  cfg.fit_model = FitModel::CLogNOverN;
  // certificates on K_800 would route flow over 320k edges per oracle step
  cfg.certify = family != FamilyKind::Complete;
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"island-fig2", "island-fig3", "holder-2d", "cartoon-2d", "isotonic-2d"};
}

std::vector<ExperimentConfig> preset(const std::string& name) {
  if (name == "island-fig2")
    return {island("complete", FamilyKind::Complete, 0.0), island("erdos_renyi_12", FamilyKind::ErdosRenyi, 12.0),
            island("erdos_renyi_16", FamilyKind::ErdosRenyi, 16.0),
            island("random_regular_12", FamilyKind::RandomRegular, 12.0)};
  if (name == "island-fig3") {
    ExperimentConfig cfg = island("kl_erdos_renyi_16", FamilyKind::ErdosRenyi, 16.0);
    cfg.sweep = {100};
    cfg.kl_grid.clear();
    for (int k = 2; k <= 5; ++k)
      for (int l = 3; l <= 9; ++l) cfg.kl_grid.emplace_back(k, l);
    cfg.policies = {LambdaPolicyKind::Oracle};
    cfg.fit_model = FitModel::PowerLaw;
    return {cfg};
  }
  const std::vector<Index> sides{16, 32, 64, 128};
  if (name == "holder-2d") return {nonparametric_config(SignalKind::Holder, sides, 10, 1)};
  if (name == "cartoon-2d") return {nonparametric_config(SignalKind::Cartoon, sides, 10, 1)};
  if (name == "isotonic-2d") return {nonparametric_config(SignalKind::BiIsotonic, {32, 64, 128}, 10, 1)};
  throw InvalidArgument("unknown preset '" + name + "'");
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "family,n,k,l,estimator,lambda_policy,lambda_value,trial,seed,mse,converged\r\n";
  for (const auto& r : records) {
    out << csv_field(r.family) << ',' << r.n << ',' << r.k << ',' << r.l << ',' << to_string(r.estimator) << ','
        << csv_field(r.lambda_policy) << ',' << format_double(r.lambda_value) << ',' << r.trial << ',' << r.seed << ','
        << format_double(r.mse) << ',' << (r.converged ? "true" : "false") << "\r\n";
  }
}

Json records_to_json(const std::vector<ExperimentRecord>& records) {
  Json arr = Json::array();
  for (const auto& r : records) {
    Json j;
    j["family"] = r.family;
    j["n"] = r.n;
    j["k"] = r.k;
    j["l"] = r.l;
    j["estimator"] = to_string(r.estimator);
    j["lambda_policy"] = r.lambda_policy;
    j["lambda_value"] = r.lambda_value;
    j["trial"] = r.trial;
    j["seed"] = r.seed;
    j["mse"] = r.mse;
    j["converged"] = r.converged;
    arr.push_back(std::move(j));
  }
  return arr;
}

void write_plot_tsv(std::ostream& out, const std::vector<RatePoint>& points) {
  out << "x\ty\tyerr\n";
  for (const auto& p : points)
    out << format_double(p.x) << '\t' << format_double(p.mean) << '\t' << format_double(p.stderr_) << '\n';
}

Json to_json(const RateFit& fit) {
  Json j;
  j["model"] = to_string(fit.model);
  j["constant"] = fit.constant;
  if (fit.model == FitModel::PowerLaw) j["exponent"] = fit.exponent;
  j["r_squared"] = fit.r_squared;
  Json pts = Json::array();
  for (const auto& p : fit.points) pts.push_back({{"n", p.x}, {"mean_mse", p.mean}, {"stderr", p.stderr_}});
  j["points"] = pts;
  return j;
}

Eigen::VectorXd read_vector(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) continue;
    std::string extra;
    if (ls >> extra) throw InvalidArgument("line " + std::to_string(lineno) + ": expected one number per line");
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      values.push_back(v);
    } catch (const std::exception&) {
      throw InvalidArgument("line " + std::to_string(lineno) + ": not a number: " + token);
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
}

void write_vector(std::ostream& out, const Eigen::VectorXd& v) {
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

}  // namespace graphtv
