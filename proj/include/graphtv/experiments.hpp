// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_EXPERIMENTS_HPP
#define GRAPHTV_EXPERIMENTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "graphtv/graph.hpp"
#include "graphtv/signals.hpp"
#include "graphtv/tvsolver.hpp"

namespace graphtv {

enum class Estimator { TV, Haar, Identity };
enum class LambdaPolicyKind { Theoretical, Oracle, Manual };
enum class FitModel { CLogNOverN, PowerLaw };

const char* to_string(Estimator e);
const char* to_string(LambdaPolicyKind p);
const char* to_string(FitModel m);
Estimator estimator_from_string(const std::string& name);
LambdaPolicyKind lambda_policy_from_string(const std::string& name);
FitModel fit_model_from_string(const std::string& name);

struct ExperimentConfig {
  std::string name = "experiment";

  FamilyKind family = FamilyKind::Complete;
  int dim = 2;          // Grid
  double degree = 0.0;  // ErdosRenyi: expected degree; RandomRegular: degree
  int power = 1;        // CyclePower
  /// Sweep values: n for most families, the side length for grids, the
  /// dimension for hypercubes.
  std::vector<Index> sweep;

  SignalSpec signal;
  /// Island (k, l) grid; empty means the single pair in `signal`.
  std::vector<std::pair<int, int>> kl_grid;

  double sigma = 0.5;
  int trials = 50;
  std::vector<Estimator> estimators{Estimator::TV};
  /// Lambda policies for the TV estimator; each gives its own records.
  std::vector<LambdaPolicyKind> policies{LambdaPolicyKind::Theoretical};

  /// Rule behind the theoretical lambda; nullopt picks the family's rule.
  std::optional<LambdaRuleKind> rule;
  double delta = 0.1;
  double constant_c = 1.0;
  double manual_lambda = 0.0;

  double beta = 0.85;
  double start_multiplier = 10.0;
  int oracle_cap = 200;

  double tol = 1e-6;
  bool certify = true;
  std::uint64_t master_seed = 1;

  FitModel fit_model = FitModel::PowerLaw;
};

/// Throws InvalidArgument on inconsistent settings.
void validate(const ExperimentConfig& cfg);

struct ExperimentRecord {
  std::string family;
  Index n = 0;
  int k = 0;
  int l = 0;
  Estimator estimator = Estimator::TV;
  std::string lambda_policy;  // theoretical | oracle | manual | none
  double lambda_value = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;
  bool converged = true;  // false on solver failure or a capped oracle search
};

/// Records sorted by (n, k, l, trial, estimator, policy). Output does not
/// depend on `threads` (0 = hardware concurrency).
std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

/// Family default for the theoretical lambda.
LambdaRuleKind default_lambda_rule(FamilyKind family, int dim);

/// Builds the graph for one sweep value; `seed` is used by random families.
Graph build_experiment_graph(const ExperimentConfig& cfg, Index sweep_value, std::uint64_t seed);

struct OracleSelection {
  int index = 1;
  bool capped = false;
  std::vector<double> curve;  // curve[j - 1] = error at index j, as evaluated
};

/// Smallest j >= 1 with error(j + i) >= error(j) for i = 1, 2, 3, evaluating
/// lazily. If no j <= cap qualifies, returns the best evaluated j <= cap
/// with capped = true.
OracleSelection select_oracle_index(const std::function<double(int)>& error_at, int cap = 200);

struct OracleResult {
  double lambda = 0.0;
  int index = 1;
  bool capped = false;
  std::vector<double> lambdas;
  std::vector<double> errors;  // ||theta_hat - theta_star||_2
  DenoiseResult fit;
};

/// lambda_j = start_multiplier * lambda_th * beta^j.
OracleResult oracle_lambda_search(const DenoiseProblem& problem, const Eigen::VectorXd& theta_star,
                                  double lambda_th, double beta = 0.85, double start_multiplier = 10.0,
                                  const DenoiseOptions& options = {}, int cap = 200);

struct RatePoint {
  double x;
  double mean;
  double stderr_;
  int count;
};

struct RateFit {
  FitModel model = FitModel::PowerLaw;
  double constant = 0.0;   // C (CLogNOverN) or exp(intercept) (PowerLaw)
  double exponent = 0.0;   // PowerLaw slope b, 0 for CLogNOverN
  double r_squared = 0.0;
  std::vector<RatePoint> points;
};

/// Mean MSE per n of the given records (callers filter by estimator/policy).
std::vector<RatePoint> mean_by_n(const std::vector<ExperimentRecord>& records);

/// Fits mean-per-n MSE. Needs at least two distinct n.
RateFit fit_rate(const std::vector<ExperimentRecord>& records, FitModel model);

struct KlCorrelation {
  double correlation = 0.0;
  bool defined = false;  // false when either variable is constant
  std::vector<RatePoint> points;  // x = k l
};

/// Pearson correlation between mean MSE per (k, l) and k l.
KlCorrelation kl_linearity_check(const std::vector<ExperimentRecord>& records);

std::vector<ExperimentRecord> filter_records(const std::vector<ExperimentRecord>& records, Estimator estimator,
                                             const std::string& policy);

struct RateStudy {
  std::vector<ExperimentRecord> records;
  RateFit fit;
};

/// TV on the 2D grid with the Grid2D rule across side lengths `sides`.
/// Holder: holder_cone with L = 4; Cartoon: pc_disk; BiIsotonic: fixed variation.
ExperimentConfig nonparametric_config(SignalKind kind, const std::vector<Index>& sides, int trials,
                                      std::uint64_t seed);
RateStudy rate_study_nonparametric(const ExperimentConfig& cfg, unsigned threads = 0);

}  // namespace graphtv

#endif  // GRAPHTV_EXPERIMENTS_HPP
