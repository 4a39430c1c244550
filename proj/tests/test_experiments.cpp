// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "graphtv/errors.hpp"
#include "graphtv/experiments.hpp"
#include "graphtv/serialize.hpp"

using namespace graphtv;

namespace {

ExperimentRecord synthetic(Index n, int k, int l, double mse) {
  ExperimentRecord r;
  r.family = "complete";
  r.n = n;
  r.k = k;
  r.l = l;
  r.mse = mse;
  return r;
}

ExperimentConfig small_island(int trials) {
  ExperimentConfig cfg;
  cfg.name = "small";
  cfg.family = FamilyKind::Complete;
  cfg.sweep = {30, 60};
  cfg.signal.kind = SignalKind::Island;
  cfg.signal.k = 3;
  cfg.signal.l = 3;
  cfg.trials = trials;
  cfg.certify = false;
  cfg.master_seed = 42;
  return cfg;
}

}  // namespace

TEST(OracleSelection, SyntheticCurves) {
  auto valley = [](int j) { return std::abs(j - 5.0); };
  const OracleSelection v = select_oracle_index(valley);
  EXPECT_EQ(v.index, 5);
  EXPECT_FALSE(v.capped);
  EXPECT_EQ(v.curve.size(), 8u);  // lazily evaluated up to j* + 3

  const OracleSelection inc = select_oracle_index([](int j) { return static_cast<double>(j); });
  EXPECT_EQ(inc.index, 1);

  // plateau counts as "not better"
  EXPECT_EQ(select_oracle_index([](int j) { return j < 3 ? 3.0 - j : 1.0; }).index, 2);

  const OracleSelection dec = select_oracle_index([](int j) { return 1.0 / j; }, 20);
  EXPECT_TRUE(dec.capped);
  EXPECT_EQ(dec.index, 20);
}

TEST(OracleSearch, CompleteGraphIsland) {
  const Index n = 100;
  const Graph g = build_complete(n);
  const Eigen::VectorXd theta = island_signal(n, 3, 3);
  const Eigen::VectorXd y = theta + gaussian_noise(n, {0.5, 2024, 0});
  LambdaRule rule;
  rule.rule = LambdaRuleKind::Complete;
  rule.sigma = 0.5;
  const double lth = lambda_value(rule, g);
  const OracleResult r = oracle_lambda_search({g, y, lth}, theta, lth);
  EXPECT_FALSE(r.capped);
  EXPECT_GT(r.lambda, lth / 4.0);
  EXPECT_LT(r.lambda, lth * 4.0);
  EXPECT_NEAR(r.lambda, 10.0 * lth * std::pow(0.85, r.index), 1e-12 * lth);
  EXPECT_EQ(r.lambdas.size(), r.errors.size());
  for (std::size_t i = 0; i < 3; ++i) EXPECT_GE(r.errors[r.index + i], r.errors[r.index - 1]);
}

TEST(RunExperiment, ZeroNoiseZeroLambda) {
  ExperimentConfig cfg = small_island(1);
  cfg.sigma = 0.0;
  cfg.policies = {LambdaPolicyKind::Manual};
  cfg.manual_lambda = 0.0;
  for (const auto& r : run_experiment(cfg, 1)) EXPECT_EQ(r.mse, 0.0);
  cfg.policies = {LambdaPolicyKind::Theoretical};
  for (const auto& r : run_experiment(cfg, 1)) {
    EXPECT_EQ(r.lambda_value, 0.0);
    EXPECT_EQ(r.mse, 0.0);
  }
}

TEST(RunExperiment, IdentityMseMatchesNoiseLevel) {
  ExperimentConfig cfg = small_island(50);
  cfg.sweep = {100};
  cfg.estimators = {Estimator::Identity};
  const auto recs = run_experiment(cfg, 2);
  ASSERT_EQ(recs.size(), 50u);
  double mean = 0.0;
  for (const auto& r : recs) mean += r.mse / 50.0;
  const double s2 = cfg.sigma * cfg.sigma;
  EXPECT_NEAR(mean, s2, 3.0 * s2 * std::sqrt(2.0 / (100.0 * 50.0)));
}

TEST(RunExperiment, RecordCountAndOrder) {
  ExperimentConfig cfg = small_island(3);
  cfg.estimators = {Estimator::TV, Estimator::Identity};
  cfg.policies = {LambdaPolicyKind::Theoretical, LambdaPolicyKind::Oracle};
  const auto recs = run_experiment(cfg, 2);
  // TV gives one record per policy
  EXPECT_EQ(recs.size(), 2u * 3u * 3u);
  for (std::size_t i = 1; i < recs.size(); ++i) {
    EXPECT_LE(recs[i - 1].n, recs[i].n);
    if (recs[i - 1].n == recs[i].n) EXPECT_LE(recs[i - 1].trial, recs[i].trial);
  }
}

TEST(RunExperiment, DeterministicAcrossThreads) {
  ExperimentConfig cfg = small_island(4);
  cfg.family = FamilyKind::ErdosRenyi;
  cfg.degree = 8;
  cfg.policies = {LambdaPolicyKind::Oracle};
  std::ostringstream a, b, c;
  write_records_csv(a, run_experiment(cfg, 1));
  write_records_csv(b, run_experiment(cfg, 4));
  write_records_csv(c, run_experiment(cfg, 1));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str(), c.str());
  cfg.master_seed = 43;
  std::ostringstream d;
  write_records_csv(d, run_experiment(cfg, 1));
  EXPECT_NE(a.str(), d.str());
}

TEST(RunExperiment, Validation) {
  ExperimentConfig cfg = small_island(1);
  cfg.sweep = {};
  EXPECT_THROW(validate(cfg), InvalidArgument);
  cfg = small_island(0);
  EXPECT_THROW(validate(cfg), InvalidArgument);
  cfg = small_island(1);
  cfg.sigma = -1;
  EXPECT_THROW(validate(cfg), InvalidArgument);
}

TEST(FitRate, SyntheticModels) {
  std::vector<ExperimentRecord> recs;
  for (Index n : {100, 200, 400, 800}) recs.push_back(synthetic(n, 3, 3, 7.0 * std::log(double(n)) / double(n)));
  const RateFit c = fit_rate(recs, FitModel::CLogNOverN);
  EXPECT_NEAR(c.constant, 7.0, 1e-10);
  EXPECT_NEAR(c.r_squared, 1.0, 1e-10);

  recs.clear();
  for (Index n : {100, 200, 400, 800}) recs.push_back(synthetic(n, 3, 3, std::pow(double(n), -0.5)));
  const RateFit p = fit_rate(recs, FitModel::PowerLaw);
  EXPECT_NEAR(p.exponent, -0.5, 1e-10);
  EXPECT_NEAR(p.constant, 1.0, 1e-10);
  EXPECT_NEAR(p.r_squared, 1.0, 1e-10);

  EXPECT_THROW(fit_rate({synthetic(100, 3, 3, 1.0)}, FitModel::PowerLaw), InvalidArgument);
}

TEST(FitRate, MeanByN) {
  const auto pts = mean_by_n({synthetic(10, 1, 1, 1.0), synthetic(10, 1, 1, 3.0), synthetic(20, 1, 1, 5.0)});
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0].mean, 2.0);
  EXPECT_EQ(pts[0].count, 2);
  EXPECT_NEAR(pts[0].stderr_, 1.0, 1e-12);  // sd sqrt(2) over sqrt(2)
  EXPECT_EQ(pts[1].mean, 5.0);
}

TEST(KlLinearity, SyntheticAndDegenerate) {
  std::vector<ExperimentRecord> recs;
  for (int k = 2; k <= 5; ++k)
    for (int l = 3; l <= 9; ++l) recs.push_back(synthetic(100, k, l, 0.01 * k * l));
  const KlCorrelation c = kl_linearity_check(recs);
  EXPECT_TRUE(c.defined);
  EXPECT_NEAR(c.correlation, 1.0, 1e-12);
  EXPECT_EQ(c.points.size(), 21u);  // distinct products k l

  for (auto& r : recs) r.mse = 0.3;
  EXPECT_FALSE(kl_linearity_check(recs).defined);
}

TEST(Presets, AllValidate) {
  for (const auto& name : preset_names())
    for (const auto& cfg : preset(name)) {
      EXPECT_NO_THROW(validate(cfg)) << name;
      const ExperimentConfig back = experiment_config_from_json(to_json(cfg));
      EXPECT_EQ(to_json(back).dump(), to_json(cfg).dump()) << name;
    }
  EXPECT_THROW(preset("nope"), InvalidArgument);
}

TEST(NonparametricStudy, SmallHolderRun) {
  const ExperimentConfig cfg = nonparametric_config(SignalKind::Holder, {8, 16}, 2, 5);
  const RateStudy s = rate_study_nonparametric(cfg, 1);
  EXPECT_EQ(s.records.size(), 4u);
  EXPECT_EQ(s.fit.points.size(), 2u);
  EXPECT_LT(s.fit.exponent, 0.0);
}
