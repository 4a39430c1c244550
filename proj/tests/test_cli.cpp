// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "graphtv/cli.hpp"
#include "graphtv/random.hpp"
#include "graphtv/serialize.hpp"

using namespace graphtv;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("graphtv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  Json json_file(const std::string& name) const { return Json::parse(slurp(path(name))); }

  void write_y(const std::string& name, const Eigen::VectorXd& y) const {
    std::ofstream f(path(name));
    write_vector(f, y);
  }

  Eigen::VectorXd read_y(const std::string& name) const {
    std::ifstream f(path(name));
    return read_vector(f);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

Eigen::VectorXd noisy(Index n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd y(n);
  for (Index i = 0; i < n; ++i) y(i) = (i < n / 2 ? 0.0 : 2.0) + rng.normal();
  return y;
}

}  // namespace

TEST_F(CliTest, SpectralStar) {
  ASSERT_EQ(run({"spectral", "--graph", "star", "--n", "10", "--out", path("star.json")}), kExitOk) << err_.str();
  const Json j = json_file("star.json");
  EXPECT_NEAR(j["rho"].get<double>(), std::sqrt(0.9), 1e-10);
  EXPECT_TRUE(fs::exists(path("manifest.json")));
  EXPECT_EQ(json_file("manifest.json")["command"], "spectral");
}

TEST_F(CliTest, SpectralHypercubeAndAugmented) {
  ASSERT_EQ(run({"spectral", "--graph", "hypercube", "--d", "8", "--out", path("h.json")}), kExitOk) << err_.str();
  EXPECT_LE(json_file("h.json")["rho"].get<double>(), 1.0 + 1e-12);
  ASSERT_EQ(run({"spectral", "--graph", "path", "--n", "5", "--augmented", "--out", path("a.json")}), kExitOk);
  EXPECT_NEAR(json_file("a.json")["rho"].get<double>(), std::sqrt(5.0), 1e-10);
}

TEST_F(CliTest, InvalidArguments) {
  EXPECT_EQ(run({}), kExitInvalidArgument);
  EXPECT_EQ(run({"spectral", "--graph", "moebius", "--n", "5", "--out", path("x.json")}), kExitInvalidArgument);
  EXPECT_EQ(run({"spectral", "--graph", "path", "--n", "1", "--out", path("x.json")}), kExitInvalidArgument);
  EXPECT_EQ(run({"spectral", "--graph", "complete", "--n", "5", "--method", "structured", "--out", path("x.json")}),
            kExitInvalidArgument);
  EXPECT_EQ(run({"denoise", "--graph", "path", "--n", "5", "--y", path("missing.txt")}), kExitInvalidArgument);
  write_y("y.txt", noisy(6, 1));
  EXPECT_EQ(run({"denoise", "--graph", "path", "--n", "7", "--y", path("y.txt"), "--lambda", "1", "--out",
                 path("t.txt")}),
            kExitInvalidArgument);
  EXPECT_EQ(run({"experiment", "--out", path("e")}), kExitInvalidArgument);
}

TEST_F(CliTest, DenoisePassthroughAndConstant) {
  const Eigen::VectorXd y = noisy(40, 2);
  write_y("y.txt", y);
  ASSERT_EQ(run({"denoise", "--graph", "path", "--n", "40", "--y", path("y.txt"), "--lambda", "0", "--out",
                 path("t0.txt")}),
            kExitOk);
  EXPECT_LT((read_y("t0.txt") - y).cwiseAbs().maxCoeff(), 1e-12);
  ASSERT_EQ(run({"denoise", "--graph", "grid", "--d", "2", "--side", "4", "--y", path("y16.txt"), "--lambda", "1",
                 "--out", path("bad.txt")}),
            kExitInvalidArgument);
  write_y("y16.txt", noisy(16, 3));
  ASSERT_EQ(run({"denoise", "--graph", "grid", "--d", "2", "--side", "4", "--y", path("y16.txt"), "--lambda", "1e6",
                 "--out", path("tc.txt")}),
            kExitOk);
  const Eigen::VectorXd t = read_y("tc.txt");
  EXPECT_LT(t.maxCoeff() - t.minCoeff(), 1e-8);
  EXPECT_TRUE(json_file("tc.txt.report.json")["converged"].get<bool>());
}

TEST_F(CliTest, DenoiseLambdaRuleAndOracle) {
  write_y("y.txt", noisy(100, 4));
  ASSERT_EQ(run({"denoise", "--graph", "path", "--n", "100", "--y", path("y.txt"), "--lambda", "0.05", "--oracle",
                 "taut-string", "--out", path("t.txt")}),
            kExitOk)
      << err_.str();
  const Json rep = json_file("t.txt.report.json");
  EXPECT_TRUE(rep["oracle_agrees"].get<bool>());
  EXPECT_NEAR(rep["objective"].get<double>(), rep["oracle_objective"].get<double>(),
              1e-6 * (1.0 + rep["oracle_objective"].get<double>()));

  ASSERT_EQ(run({"denoise", "--graph", "complete", "--n", "100", "--y", path("y.txt"), "--lambda-rule", "complete",
                 "--sigma", "1", "--out", path("k.txt")}),
            kExitOk);
  EXPECT_EQ(json_file("k.txt.report.json")["lambda_rule"], "complete");
  EXPECT_GT(json_file("k.txt.report.json")["lambda"].get<double>(), 0.0);
}

TEST_F(CliTest, DenoiseNonConvergenceExitCode) {
  write_y("y.txt", noisy(200, 5));
  EXPECT_EQ(run({"denoise", "--graph", "path", "--n", "200", "--y", path("y.txt"), "--lambda", "0.05",
                 "--algorithm", "primal_dual", "--max-iter", "2", "--out", path("t.txt")}),
            kExitNumericalFailure);
  EXPECT_FALSE(json_file("t.txt.report.json")["converged"].get<bool>());
}

TEST_F(CliTest, ExperimentOutputsAndRerun) {
  const std::string cfg = R"({"name": "tiny", "family": "erdos_renyi", "degree": 6, "sweep": [20, 40],
    "signal": {"kind": "island", "k": 2, "l": 3}, "trials": 3, "policies": ["theoretical", "oracle"],
    "estimators": ["tv", "identity"], "master_seed": 9})";
  std::ofstream(path("cfg.json")) << cfg;
  ASSERT_EQ(run({"experiment", "--config", path("cfg.json"), "--out", path("a"), "--threads", "1"}), kExitOk)
      << err_.str();
  for (const char* f : {"a/manifest.json", "a/records.csv", "a/records.json", "a/tiny__fit.json",
                        "a/tiny__tv_oracle.tsv", "a/tiny__identity_none.tsv"})
    EXPECT_TRUE(fs::exists(path(f))) << f;
  const std::string csv = slurp(path("a/records.csv"));
  EXPECT_EQ(csv.substr(0, csv.find("\r\n")),
            "family,n,k,l,estimator,lambda_policy,lambda_value,trial,seed,mse,converged");

  ASSERT_EQ(run({"experiment", "--config", path("a/manifest.json"), "--out", path("b"), "--threads", "4"}), kExitOk);
  EXPECT_EQ(csv, slurp(path("b/records.csv")));
  EXPECT_EQ(slurp(path("a/manifest.json")), slurp(path("b/manifest.json")));
}

TEST_F(CliTest, ExperimentZeroNoise) {
  const std::string cfg = R"({"name": "quiet", "family": "complete", "sweep": [12], "sigma": 0,
    "signal": {"kind": "island", "k": 3, "l": 3}, "trials": 2, "certify": false})";
  std::ofstream(path("cfg.json")) << cfg;
  ASSERT_EQ(run({"experiment", "--config", path("cfg.json"), "--out", path("q")}), kExitOk) << err_.str();
  const Json recs = json_file("q/records.json");
  ASSERT_EQ(recs.size(), 2u);
  for (const auto& r : recs) EXPECT_EQ(r["mse"].get<double>(), 0.0);
}
