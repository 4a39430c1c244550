// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_TVSOLVER_HPP
#define GRAPHTV_TVSOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphtv/graph.hpp"

namespace graphtv {

/// Graph TV denoising:  minimize (1/n) ||theta - y||^2 + lambda ||D theta||_1.
struct DenoiseProblem {
  const Graph& graph;
  Eigen::VectorXd y;
  double lambda = 0.0;
};

enum class Algorithm {
  Auto,              // CompleteIsotonic on complete graphs, ParametricCut otherwise
  ParametricCut,     // exact divide-and-conquer over minimum cuts
  CompleteIsotonic,  // exact, complete graphs only: sort + pool adjacent violators
  PrimalDual,        // Chambolle-Pock, accelerated by strong convexity
};

const char* to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

struct DenoiseOptions {
  Algorithm algorithm = Algorithm::Auto;
  /// Certificate tolerance: stationarity residual <= tol (1 + ||y||_inf) and |z| <= 1 + tol.
  double tol = 1e-6;
  int max_iter = 50000;
  /// Rebuild the dual certificate from theta_hat alone (kkt_certificate). When
  /// false the solver's own dual is reported.
  bool certify = true;
};

struct DenoiseResult {
  Eigen::VectorXd theta_hat;
  /// Subgradient certificate; empty when the solver produced none and certify == false.
  Eigen::VectorXd dual_z;
  int iterations = 0;
  /// ||(2/n)(theta - y) + lambda D^T z||_inf, NaN when no certificate is available.
  double stationarity_residual = 0.0;
  double dual_feasibility = 0.0;
  double objective = 0.0;
  bool converged = false;
  std::vector<std::string> warnings;
};

/// (1/n) ||theta - y||^2 + lambda ||D theta||_1.
double tv_objective(const Graph& g, const Eigen::VectorXd& y, double lambda, const Eigen::VectorXd& theta);

/// ||D theta||_1 and D theta for a graph.
double tv_norm(const Graph& g, const Eigen::VectorXd& theta);
Eigen::VectorXd graph_differences(const Graph& g, const Eigen::VectorXd& theta);

/// D^T z.
Eigen::VectorXd graph_divergence(const Graph& g, const Eigen::VectorXd& z);

/// Throws InvalidArgument on negative lambda, size mismatch or non-finite y.
DenoiseResult denoise(const DenoiseProblem& problem, const DenoiseOptions& options = {});

struct KktCertificate {
  Eigen::VectorXd z;
  double residual;  // ||(2/n)(theta - y) + lambda D^T z||_inf
};

/// Fixes z_e = sign((D theta)_e) on jump edges, |(D theta)_e| > 1e-8 (1 + ||y||_inf),
/// and routes the remaining stationarity defect through the other edges with
/// |z_e| <= 1 as a max-flow problem.
KktCertificate kkt_certificate(const DenoiseProblem& problem, const Eigen::VectorXd& theta);

/// Jump threshold used by kkt_certificate.
double jump_tolerance(const Eigen::VectorXd& y);

/// Exact 1D solver (Condat's direct algorithm) for the path graph,
/// minimizing (1/n) ||theta - y||^2 + lambda sum |theta_{i+1} - theta_i|.
Eigen::VectorXd denoise_path_exact(const Eigen::VectorXd& y, double lambda);

/// Largest ||D^T D|| eigenvalue by power iteration (relative tolerance `tol`).
double operator_norm_squared(const Graph& g, double tol = 1e-6, int max_iter = 10000);

// ---------------------------------------------------------------------------
// Regularization parameter rules.

enum class LambdaRuleKind {
  TheoremGeneral,  // sigma rho sqrt(2 log(e m / delta)) / n
  Grid2D,          // c sigma sqrt(log n log(e n / delta)) / n
  GridHighDim,     // c sigma sqrt(log(e n / delta)) / n
  Hypercube,       // c sigma sqrt(log(e n / delta)) / n
  Complete,        // c sigma sqrt(log(e n / delta)) / n^2
  Star,            // c sigma sqrt(log(e n / delta)) / n
  RandomGap,       // c sigma sqrt(log(e d n / delta)) / (d n)
  CyclePower,      // c sigma sqrt(log(e n / delta)) / min(sqrt(n) k^3, n)
  Manual,
};

const char* to_string(LambdaRuleKind kind);
LambdaRuleKind lambda_rule_from_string(const std::string& name);

struct LambdaRule {
  LambdaRuleKind rule = LambdaRuleKind::TheoremGeneral;
  double sigma = 1.0;
  double delta = 0.1;
  double constant_c = 1.0;
  double manual_value = 0.0;
};

/// Evaluates the rule for graph g. `rho` is required for TheoremGeneral.
/// RandomGap uses the family's nominal degree (p (n-1) or d), else 2m/n.
double lambda_value(const LambdaRule& rule, const Graph& g, std::optional<double> rho = std::nullopt);

}  // namespace graphtv

#endif  // GRAPHTV_TVSOLVER_HPP
