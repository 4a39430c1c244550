// SPDX-License-Identifier: Apache-2.0

#include "graphtv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "graphtv/errors.hpp"
#include "graphtv/haar.hpp"
#include "graphtv/random.hpp"
#include "graphtv/spectral.hpp"

namespace graphtv {

const char* to_string(Estimator e) {
  switch (e) {
    case Estimator::TV: return "tv";
    case Estimator::Haar: return "haar";
    case Estimator::Identity: return "identity";
  }
  return "tv";
}

const char* to_string(LambdaPolicyKind p) {
  switch (p) {
    case LambdaPolicyKind::Theoretical: return "theoretical";
    case LambdaPolicyKind::Oracle: return "oracle";
    case LambdaPolicyKind::Manual: return "manual";
  }
  return "theoretical";
}

const char* to_string(FitModel m) { return m == FitModel::CLogNOverN ? "c_log_n_over_n" : "power_law"; }

Estimator estimator_from_string(const std::string& name) {
  for (auto e : {Estimator::TV, Estimator::Haar, Estimator::Identity})
    if (name == to_string(e)) return e;
  throw InvalidArgument("unknown estimator '" + name + "'");
}

LambdaPolicyKind lambda_policy_from_string(const std::string& name) {
  for (auto p : {LambdaPolicyKind::Theoretical, LambdaPolicyKind::Oracle, LambdaPolicyKind::Manual})
    if (name == to_string(p)) return p;
  throw InvalidArgument("unknown lambda policy '" + name + "'");
}

FitModel fit_model_from_string(const std::string& name) {
  for (auto m : {FitModel::CLogNOverN, FitModel::PowerLaw})
    if (name == to_string(m)) return m;
  throw InvalidArgument("unknown fit model '" + name + "'");
}

LambdaRuleKind default_lambda_rule(FamilyKind family, int dim) {
  switch (family) {
    case FamilyKind::Grid: return dim == 2 ? LambdaRuleKind::Grid2D : (dim >= 3 ? LambdaRuleKind::GridHighDim : LambdaRuleKind::TheoremGeneral);
    case FamilyKind::Hypercube: return LambdaRuleKind::Hypercube;
    case FamilyKind::Complete: return LambdaRuleKind::Complete;
    case FamilyKind::Star: return LambdaRuleKind::Star;
    case FamilyKind::CyclePower: return LambdaRuleKind::CyclePower;
    case FamilyKind::ErdosRenyi:
    case FamilyKind::RandomRegular: return LambdaRuleKind::RandomGap;
    default: return LambdaRuleKind::TheoremGeneral;
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (cfg.sweep.empty()) throw InvalidArgument("sweep must list at least one size");
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
  if (!(cfg.start_multiplier > 0.0)) throw InvalidArgument("start multiplier must be positive");
  if (cfg.oracle_cap < 1) throw InvalidArgument("oracle cap must be positive");
  if (!(cfg.sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  if (cfg.estimators.empty()) throw InvalidArgument("no estimators requested");
  if (cfg.family == FamilyKind::Custom) throw InvalidArgument("experiments need a generated graph family");
  for (Index v : cfg.sweep)
    if (v < 1) throw InvalidArgument("sweep values must be positive");
  const bool tv = std::find(cfg.estimators.begin(), cfg.estimators.end(), Estimator::TV) != cfg.estimators.end();
  if (tv && cfg.policies.empty()) throw InvalidArgument("the TV estimator needs at least one lambda policy");
  const bool haar = std::find(cfg.estimators.begin(), cfg.estimators.end(), Estimator::Haar) != cfg.estimators.end();
  if (haar) {
    if (cfg.family != FamilyKind::Grid || cfg.dim != 2) throw InvalidArgument("the Haar estimator needs a 2D grid");
    for (Index v : cfg.sweep)
      if (!is_power_of_two(v)) throw InvalidArgument("the Haar estimator needs power-of-two sides");
  }
  if ((cfg.family == FamilyKind::ErdosRenyi || cfg.family == FamilyKind::RandomRegular) && !(cfg.degree > 0.0))
    throw InvalidArgument("random graph families need a positive degree");
}

Graph build_experiment_graph(const ExperimentConfig& cfg, Index v, std::uint64_t seed) {
  switch (cfg.family) {
    case FamilyKind::Path: return build_path(v);
    case FamilyKind::Grid: return build_grid(cfg.dim, v);
    case FamilyKind::Hypercube: return build_hypercube(static_cast<int>(v));
    case FamilyKind::Complete: return build_complete(v);
    case FamilyKind::Star: return build_star(v);
    case FamilyKind::CyclePower: return build_cycle_power(v, cfg.power);
    case FamilyKind::ErdosRenyi:
      if (v < 2) throw InvalidArgument("Erdos-Renyi graphs need n >= 2");
      return build_erdos_renyi(v, std::min(1.0, cfg.degree / static_cast<double>(v - 1)), seed);
    case FamilyKind::RandomRegular: return build_random_regular(v, static_cast<int>(std::lround(cfg.degree)), seed);
    case FamilyKind::Custom: break;
  }
  throw InvalidArgument("experiments need a generated graph family");
}

OracleSelection select_oracle_index(const std::function<double(int)>& error_at, int cap) {
  OracleSelection sel;
  auto err = [&](int j) {
    while (static_cast<int>(sel.curve.size()) < j) sel.curve.push_back(error_at(static_cast<int>(sel.curve.size()) + 1));
    return sel.curve[static_cast<std::size_t>(j - 1)];
  };
  for (int j = 1; j <= cap; ++j) {
    const double base = err(j);
    if (err(j + 1) >= base && err(j + 2) >= base && err(j + 3) >= base) {
      sel.index = j;
      return sel;
    }
  }
  sel.capped = true;
  const auto best = std::min_element(sel.curve.begin(), sel.curve.begin() + cap);
  sel.index = static_cast<int>(best - sel.curve.begin()) + 1;
  return sel;
}

OracleResult oracle_lambda_search(const DenoiseProblem& problem, const Eigen::VectorXd& theta_star, double lambda_th,
                                  double beta, double start_multiplier, const DenoiseOptions& options, int cap) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("beta must lie in (0, 1)");
  if (!(lambda_th >= 0.0)) throw InvalidArgument("lambda_th must be nonnegative");
  OracleResult out;
  std::map<int, DenoiseResult> fits;
  auto error_at = [&](int j) {
    const double lam = start_multiplier * lambda_th * std::pow(beta, j);
    DenoiseProblem p{problem.graph, problem.y, lam};
    DenoiseResult r = denoise(p, options);
    const double e = (r.theta_hat - theta_star).norm();
    out.lambdas.push_back(lam);
    r.dual_z.resize(0);  // only theta is needed later
    fits.emplace(j, std::move(r));
    return e;
  };
  const auto sel = select_oracle_index(error_at, cap);
  out.index = sel.index;
  out.capped = sel.capped;
  out.errors = sel.curve;
  out.lambda = out.lambdas[static_cast<std::size_t>(sel.index - 1)];
  out.fit = std::move(fits.at(sel.index));
  return out;
}

namespace {

struct Unit {
  std::size_t sweep_index;
  std::size_t kl_index;
  int trial;
};

struct SharedGraph {
  std::optional<Graph> graph;
  std::optional<double> rho;
};

bool is_random(FamilyKind f) { return f == FamilyKind::ErdosRenyi || f == FamilyKind::RandomRegular; }

double resolve_theoretical(const ExperimentConfig& cfg, const Graph& g, std::optional<double>& rho_cache) {
  LambdaRule rule;
  rule.rule = cfg.rule.value_or(default_lambda_rule(cfg.family, cfg.dim));
  rule.sigma = cfg.sigma;
  rule.delta = cfg.delta;
  rule.constant_c = cfg.constant_c;
  rule.manual_value = cfg.manual_lambda;
  if (rule.rule == LambdaRuleKind::TheoremGeneral && !rho_cache) rho_cache = rho(g).rho;
  return lambda_value(rule, g, rho_cache);
}

std::vector<ExperimentRecord> run_unit(const ExperimentConfig& cfg, const Unit& u, const SharedGraph& shared,
                                       const std::vector<std::pair<int, int>>& kls) {
  const Index v = cfg.sweep[u.sweep_index];
  const auto [k, l] = kls[u.kl_index];
  const std::uint64_t trial_seed =
      derive_seed({cfg.master_seed, static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(u.trial)});

  std::optional<Graph> own;
  std::optional<double> rho_cache = shared.rho;
  if (!shared.graph) own.emplace(build_experiment_graph(cfg, v, derive_seed({trial_seed, 0x67})));
  const Graph& g = shared.graph ? *shared.graph : *own;
  const Index n = g.n();

  SignalSpec spec = cfg.signal;
  spec.k = k;
  spec.l = l;
  if (spec.kind == SignalKind::BiIsotonic) spec.seed = derive_seed({cfg.master_seed, static_cast<std::uint64_t>(v), 0xb1});
  const Eigen::VectorXd theta_star = make_signal(spec, n);
  const NoiseModel noise{cfg.sigma, derive_seed({cfg.master_seed, static_cast<std::uint64_t>(n)}),
                         static_cast<std::uint64_t>(u.trial)};
  const Eigen::VectorXd y = theta_star + gaussian_noise(n, noise);

  std::vector<ExperimentRecord> out;
  auto record = [&](Estimator est, const std::string& policy, double lam, const Eigen::VectorXd& fit, bool ok) {
    ExperimentRecord r;
    r.family = to_string(cfg.family);
    r.n = n;
    r.k = k;
    r.l = l;
    r.estimator = est;
    r.lambda_policy = policy;
    r.lambda_value = lam;
    r.trial = u.trial;
    r.seed = trial_seed;
    r.mse = (fit - theta_star).squaredNorm() / static_cast<double>(n);
    r.converged = ok;
    out.push_back(std::move(r));
  };

  DenoiseOptions opts;
  opts.tol = cfg.tol;
  opts.certify = cfg.certify;
  for (Estimator est : cfg.estimators) {
    switch (est) {
      case Estimator::Identity: record(est, "none", 0.0, y, true); break;
      case Estimator::Haar: {
        const Index side = cfg.sweep[u.sweep_index];
        const Eigen::Map<const Eigen::MatrixXd> img(y.data(), side, side);
        const Eigen::MatrixXd fit = haar_denoise_2d(img, cfg.sigma);
        record(est, "none", 0.0, Eigen::Map<const Eigen::VectorXd>(fit.data(), n), true);
        break;
      }
      case Estimator::TV:
        for (LambdaPolicyKind policy : cfg.policies) {
          if (policy == LambdaPolicyKind::Oracle) {
            const double lam_th = resolve_theoretical(cfg, g, rho_cache);
            DenoiseProblem p{g, y, lam_th};
            auto res = oracle_lambda_search(p, theta_star, lam_th, cfg.beta, cfg.start_multiplier, opts, cfg.oracle_cap);
            record(est, to_string(policy), res.lambda, res.fit.theta_hat, res.fit.converged && !res.capped);
          } else {
            const double lam =
                policy == LambdaPolicyKind::Manual ? cfg.manual_lambda : resolve_theoretical(cfg, g, rho_cache);
            auto res = denoise(DenoiseProblem{g, y, lam}, opts);
            record(est, to_string(policy), lam, res.theta_hat, res.converged);
          }
        }
        break;
    }
  }
  return out;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, unsigned threads) {
  validate(cfg);
  std::vector<std::pair<int, int>> kls = cfg.kl_grid;
  if (kls.empty()) kls.emplace_back(cfg.signal.k, cfg.signal.l);

  // Deterministic graphs (and rho, when needed) are shared across trials.
  std::vector<SharedGraph> shared(cfg.sweep.size());
  const bool needs_rho =
      cfg.rule.value_or(default_lambda_rule(cfg.family, cfg.dim)) == LambdaRuleKind::TheoremGeneral &&
      std::any_of(cfg.policies.begin(), cfg.policies.end(), [](auto p) { return p != LambdaPolicyKind::Manual; });
  if (!is_random(cfg.family))
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
      shared[i].graph.emplace(build_experiment_graph(cfg, cfg.sweep[i], 0));
      if (needs_rho) shared[i].rho = rho(*shared[i].graph).rho;
    }

  std::vector<Unit> units;
  for (std::size_t s = 0; s < cfg.sweep.size(); ++s)
    for (std::size_t q = 0; q < kls.size(); ++q)
      for (int t = 0; t < cfg.trials; ++t) units.push_back({s, q, t});

  std::vector<std::vector<ExperimentRecord>> results(units.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= units.size()) return;
      try {
        results[i] = run_unit(cfg, units[i], shared[units[i].sweep_index], kls);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = units.size();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, units.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ExperimentRecord> records;
  for (auto& r : results) records.insert(records.end(), r.begin(), r.end());
  std::stable_sort(records.begin(), records.end(), [](const ExperimentRecord& a, const ExperimentRecord& b) {
    return std::tie(a.n, a.k, a.l, a.trial, a.estimator, a.lambda_policy) <
           std::tie(b.n, b.k, b.l, b.trial, b.estimator, b.lambda_policy);
  });
  return records;
}

std::vector<ExperimentRecord> filter_records(const std::vector<ExperimentRecord>& records, Estimator estimator,
                                             const std::string& policy) {
  std::vector<ExperimentRecord> out;
  for (const auto& r : records)
    if (r.estimator == estimator && (policy.empty() || r.lambda_policy == policy)) out.push_back(r);
  return out;
}

namespace {

template <typename Key>
std::vector<RatePoint> aggregate(const std::vector<ExperimentRecord>& records, Key key) {
  std::map<double, std::vector<double>> groups;
  for (const auto& r : records) groups[key(r)].push_back(r.mse);
  std::vector<RatePoint> points;
  for (const auto& [x, values] : groups) {
    const double count = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= count;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double se = values.size() > 1 ? std::sqrt(var / (count - 1.0) / count) : 0.0;
    points.push_back({x, mean, se, static_cast<int>(values.size())});
  }
  return points;
}

}  // namespace

std::vector<RatePoint> mean_by_n(const std::vector<ExperimentRecord>& records) {
  return aggregate(records, [](const ExperimentRecord& r) { return static_cast<double>(r.n); });
}

RateFit fit_rate(const std::vector<ExperimentRecord>& records, FitModel model) {
  RateFit fit;
  fit.model = model;
  fit.points = mean_by_n(records);
  if (fit.points.size() < 2) throw InvalidArgument("rate fit needs at least two distinct n");

  const std::size_t k = fit.points.size();
  Eigen::VectorXd x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double n = fit.points[i].x;
    if (model == FitModel::CLogNOverN) {
      x(i) = std::log(n) / n;
      y(i) = fit.points[i].mean;
    } else {
      if (!(fit.points[i].mean > 0.0)) throw InvalidArgument("power-law fit needs positive mean MSE");
      x(i) = std::log(n);
      y(i) = std::log(fit.points[i].mean);
    }
  }
  Eigen::VectorXd pred;
  if (model == FitModel::CLogNOverN) {
    fit.constant = x.dot(y) / x.squaredNorm();
    pred = fit.constant * x;
  } else {
    const double xm = x.mean(), ym = y.mean();
    const double sxx = (x.array() - xm).square().sum();
    fit.exponent = ((x.array() - xm) * (y.array() - ym)).sum() / sxx;
    const double intercept = ym - fit.exponent * xm;
    fit.constant = std::exp(intercept);
    pred = (intercept + fit.exponent * x.array()).matrix();
  }
  const double ss_tot = (y.array() - y.mean()).square().sum();
  const double ss_res = (y - pred).squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

KlCorrelation kl_linearity_check(const std::vector<ExperimentRecord>& records) {
  KlCorrelation out;
  std::map<std::pair<int, int>, std::vector<double>> groups;
  for (const auto& r : records) groups[{r.k, r.l}].push_back(r.mse);
  std::vector<double> xs, ys;
  for (const auto& [kl, values] : groups) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    xs.push_back(static_cast<double>(kl.first * kl.second));
    ys.push_back(mean);
  }
  out.points = aggregate(records, [](const ExperimentRecord& r) { return static_cast<double>(r.k * r.l); });
  if (xs.size() < 2) return out;
  const Eigen::Map<const Eigen::ArrayXd> x(xs.data(), static_cast<Index>(xs.size()));
  const Eigen::Map<const Eigen::ArrayXd> y(ys.data(), static_cast<Index>(ys.size()));
  const double sxx = (x - x.mean()).square().sum();
  const double syy = (y - y.mean()).square().sum();
  if (sxx <= 0.0 || syy <= 0.0) return out;
  out.correlation = ((x - x.mean()) * (y - y.mean())).sum() / std::sqrt(sxx * syy);
  out.defined = true;
  return out;
}

ExperimentConfig nonparametric_config(SignalKind kind, const std::vector<Index>& sides, int trials,
                                      std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.family = FamilyKind::Grid;
  cfg.dim = 2;
  cfg.sweep = sides;
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.sigma = 0.5;
  cfg.rule = LambdaRuleKind::Grid2D;
  cfg.policies = {LambdaPolicyKind::Theoretical};
  cfg.estimators = {Estimator::TV};
  cfg.signal.kind = kind;
  cfg.signal.dim = 2;
  switch (kind) {
    case SignalKind::Holder:
      cfg.name = "holder-2d";
      cfg.signal.shape = "holder_cone";
      cfg.signal.alpha = 1.0;
      cfg.signal.L = 4.0;  // with L = 1 the Grid2D lambda fuses the cone flat at these sizes
      break;
    case SignalKind::Cartoon:
      cfg.name = "cartoon-2d";
      cfg.signal.shape = "pc_disk";
      cfg.signal.L = 1.0;
      break;
    case SignalKind::BiIsotonic:
      cfg.name = "isotonic-2d";
      cfg.signal.variation_sqrt = 1.0;
      break;
    default: throw InvalidArgument("nonparametric studies cover holder, cartoon and bi_isotonic signals");
  }
  return cfg;
}

RateStudy rate_study_nonparametric(const ExperimentConfig& cfg, unsigned threads) {
  RateStudy study;
  study.records = run_experiment(cfg, threads);
  study.fit = fit_rate(filter_records(study.records, Estimator::TV, ""), FitModel::PowerLaw);
  return study;
}

}  // namespace graphtv
