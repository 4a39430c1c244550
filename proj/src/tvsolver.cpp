// SPDX-License-Identifier: Apache-2.0

#include "graphtv/tvsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "graphtv/errors.hpp"
#include "graphtv/maxflow.hpp"
#include "graphtv/random.hpp"

namespace graphtv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SolverOutput {
  Eigen::VectorXd theta;
  Eigen::VectorXd z;  // native dual, may be empty
  int iterations = 0;
  bool converged = true;
};

// Exact solution by recursive splitting. Each piece A first tries the best
// constant t = mean(y'_A); a minimum cut of  mu cut(B) - sum_{B} (y'_i - t)
// either certifies that constant (all supply routed, flows give z) or splits
// A into an upper part B and a lower part A \ B whose connecting edges then
// contribute fixed linear terms.
SolverOutput solve_parametric_cut(const Graph& g, const Eigen::VectorXd& y, double mu) {
  const Index n = g.n();
  const auto adj = g.adjacency();
  SolverOutput out;
  out.theta.resize(n);
  out.z = Eigen::VectorXd::Zero(g.m());
  Eigen::VectorXd shifted = y;
  std::vector<int> local(static_cast<std::size_t>(n), -1);
  std::vector<char> upper(static_cast<std::size_t>(n), 0);

  Index comp_count = 0;
  const auto comp = connected_components(g, &comp_count);
  std::vector<std::vector<Index>> pending(static_cast<std::size_t>(comp_count));
  for (Index v = 0; v < n; ++v) pending[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])].push_back(v);

  struct InternalEdge {
    Index edge;
    int arc;
  };
  std::vector<InternalEdge> internal;

  while (!pending.empty()) {
    std::vector<Index> piece = std::move(pending.back());
    pending.pop_back();
    ++out.iterations;
    if (piece.size() == 1) {
      out.theta(piece[0]) = shifted(piece[0]);
      continue;
    }
    double t = 0.0;
    for (Index v : piece) t += shifted(v);
    t /= static_cast<double>(piece.size());

    const int k = static_cast<int>(piece.size());
    const int source = k, sink = k + 1;
    MaxFlow flow(k + 2);
    double scale = mu;
    for (int i = 0; i < k; ++i) {
      const Index v = piece[static_cast<std::size_t>(i)];
      local[static_cast<std::size_t>(v)] = i;
      const double w = shifted(v) - t;
      scale = std::max(scale, std::abs(w));
      if (w > 0)
        flow.add_arc(source, i, w);
      else if (w < 0)
        flow.add_arc(i, sink, -w);
    }
    internal.clear();
    for (Index v : piece)
      for (const auto& inc : adj[static_cast<std::size_t>(v)]) {
        const int j = local[static_cast<std::size_t>(inc.neighbor)];
        if (inc.neighbor > v && j >= 0)
          internal.push_back({inc.edge, flow.add_arc(local[static_cast<std::size_t>(v)], j, mu, mu)});
      }
    flow.solve(source, sink, 1e-12 * scale);
    const auto reach = flow.reachable_from(source);

    std::size_t upper_count = 0;
    for (int i = 0; i < k; ++i) upper_count += reach[static_cast<std::size_t>(i)] ? 1 : 0;

    if (upper_count == 0 || upper_count == piece.size()) {
      for (Index v : piece) out.theta(v) = t;
      for (const auto& ie : internal) out.z(ie.edge) = flow.flow(ie.arc) / mu;
    } else {
      std::vector<Index> hi, lo;
      for (Index v : piece) {
        const bool up = reach[static_cast<std::size_t>(local[static_cast<std::size_t>(v)])] != 0;
        upper[static_cast<std::size_t>(v)] = up;
        (up ? hi : lo).push_back(v);
      }
      for (const auto& ie : internal) {
        const auto& e = g.edges()[static_cast<std::size_t>(ie.edge)];
        const bool u_up = upper[static_cast<std::size_t>(e.u)] != 0;
        if (u_up == (upper[static_cast<std::size_t>(e.v)] != 0)) continue;
        const Index top = u_up ? e.u : e.v;
        const Index bottom = u_up ? e.v : e.u;
        shifted(top) -= mu;
        shifted(bottom) += mu;
        out.z(ie.edge) = u_up ? 1.0 : -1.0;
      }
      pending.push_back(std::move(lo));
      pending.push_back(std::move(hi));
    }
    for (Index v : piece) local[static_cast<std::size_t>(v)] = -1;
  }
  return out;
}

// Complete graph: the minimizer keeps the order of y, and on that order
// sum_{i<j} |theta_i - theta_j| = sum_k (2k - n - 1) theta_(k), so the problem
// is isotonic regression of y_(k) - mu (2k - n - 1).
SolverOutput solve_complete_isotonic(const Eigen::VectorXd& y, double mu) {
  const Index n = y.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y(a) < y(b); });

  // Sums of y and of the integer rank weights are pooled separately; with
  // mu large the shifted values dwarf y and would cancel badly otherwise.
  struct Block {
    double sum_y;
    Index sum_w;
    Index count;
    double value(double mu) const {
      return (sum_y - mu * static_cast<double>(sum_w)) / static_cast<double>(count);
    }
  };
  std::vector<Block> blocks;
  blocks.reserve(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    blocks.push_back({y(order[static_cast<std::size_t>(k)]), 2 * (k + 1) - n - 1, 1});
    while (blocks.size() > 1) {
      const auto& last = blocks[blocks.size() - 1];
      const auto& prev = blocks[blocks.size() - 2];
      if (prev.value(mu) < last.value(mu)) break;
      Block merged{prev.sum_y + last.sum_y, prev.sum_w + last.sum_w, prev.count + last.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  SolverOutput out;
  out.theta.resize(n);
  Index k = 0;
  for (const auto& b : blocks) {
    const double value = b.value(mu);
    for (Index c = 0; c < b.count; ++c) out.theta(order[static_cast<std::size_t>(k++)]) = value;
  }
  out.iterations = 1;
  return out;
}

// Accelerated Chambolle-Pock on  min 1/2 ||theta - y||^2 + mu ||D theta||_1.
// The reported primal point is theta = y - D^T u, which makes the
// stationarity residual vanish for z = u / mu. Stops once the duality gap
// sum_e (mu |D theta|_e - u_e (D theta)_e), in objective units, drops below
// tol / 100 relative to the objective.
SolverOutput solve_primal_dual(const Graph& g, const Eigen::VectorXd& y, double mu, const DenoiseOptions& opts) {
  const double l2 = std::max(operator_norm_squared(g), 1e-12);
  double tau = 0.99 / std::sqrt(l2);
  double sigma = 0.99 / std::sqrt(l2);
  const double gamma = 1.0;
  const double n = static_cast<double>(g.n());

  SolverOutput out;
  Eigen::VectorXd theta = y;
  Eigen::VectorXd theta_bar = y;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(g.m());
  out.converged = false;
  auto gap_of = [&](const Eigen::VectorXd& cand) {
    const Eigen::VectorXd diff = graph_differences(g, cand);
    return mu * diff.lpNorm<1>() - u.dot(diff);
  };
  for (int it = 1; it <= opts.max_iter; ++it) {
    u = (u + sigma * graph_differences(g, theta_bar)).cwiseMax(-mu).cwiseMin(mu);
    const Eigen::VectorXd next = (theta - tau * graph_divergence(g, u) + tau * y) / (1.0 + tau);
    const double omega = 1.0 / std::sqrt(1.0 + 2.0 * gamma * tau);
    tau *= omega;
    sigma /= omega;
    theta_bar = next + omega * (next - theta);
    theta = next;
    out.iterations = it;
    if (it % 10 != 0) continue;
    const Eigen::VectorXd cand = y - graph_divergence(g, u);
    const double objective = ((cand - y).squaredNorm() + 2.0 * mu * tv_norm(g, cand)) / n;
    if ((2.0 / n) * gap_of(cand) <= 1e-2 * opts.tol * (1.0 + objective)) {
      out.converged = true;
      break;
    }
  }
  out.theta = y - graph_divergence(g, u);
  out.z = u / mu;
  return out;
}

double stationarity(const Graph& g, const Eigen::VectorXd& y, double lambda, const Eigen::VectorXd& theta,
                    const Eigen::VectorXd& z) {
  const double n = static_cast<double>(g.n());
  return ((2.0 / n) * (theta - y) + lambda * graph_divergence(g, z)).lpNorm<Eigen::Infinity>();
}

}  // namespace

const char* to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Auto: return "auto";
    case Algorithm::ParametricCut: return "parametric_cut";
    case Algorithm::CompleteIsotonic: return "complete_isotonic";
    case Algorithm::PrimalDual: return "primal_dual";
  }
  return "auto";
}

Algorithm algorithm_from_string(const std::string& name) {
  for (auto a : {Algorithm::Auto, Algorithm::ParametricCut, Algorithm::CompleteIsotonic, Algorithm::PrimalDual})
    if (name == to_string(a)) return a;
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

Eigen::VectorXd graph_differences(const Graph& g, const Eigen::VectorXd& theta) {
  Eigen::VectorXd out(g.m());
  Index r = 0;
  for (const auto& e : g.edges()) out(r++) = theta(e.u) - theta(e.v);
  return out;
}

Eigen::VectorXd graph_divergence(const Graph& g, const Eigen::VectorXd& z) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(g.n());
  Index r = 0;
  for (const auto& e : g.edges()) {
    out(e.u) += z(r);
    out(e.v) -= z(r);
    ++r;
  }
  return out;
}

double tv_norm(const Graph& g, const Eigen::VectorXd& theta) {
  double s = 0.0;
  for (const auto& e : g.edges()) s += std::abs(theta(e.u) - theta(e.v));
  return s;
}

double tv_objective(const Graph& g, const Eigen::VectorXd& y, double lambda, const Eigen::VectorXd& theta) {
  return (theta - y).squaredNorm() / static_cast<double>(g.n()) + lambda * tv_norm(g, theta);
}

double jump_tolerance(const Eigen::VectorXd& y) { return 1e-8 * (1.0 + y.lpNorm<Eigen::Infinity>()); }

double operator_norm_squared(const Graph& g, double tol, int max_iter) {
  if (g.m() == 0) return 0.0;
  Rng rng(0x5eed);
  Eigen::VectorXd x(g.n());
  for (Index i = 0; i < x.size(); ++i) x(i) = rng.uniform() - 0.5;
  x.normalize();
  double estimate = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd next = graph_divergence(g, graph_differences(g, x));
    const double value = next.norm();
    if (value == 0.0) return 0.0;
    x = next / value;
    if (std::abs(value - estimate) <= tol * value) return value;
    estimate = value;
  }
  return estimate;
}

KktCertificate kkt_certificate(const DenoiseProblem& problem, const Eigen::VectorXd& theta) {
  const Graph& g = problem.graph;
  const Eigen::VectorXd& y = problem.y;
  const double n = static_cast<double>(g.n());
  const double mu = problem.lambda * n / 2.0;
  const double jump = jump_tolerance(y);

  const Eigen::VectorXd diff = graph_differences(g, theta);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(g.m());
  for (Index e = 0; e < g.m(); ++e)
    if (std::abs(diff(e)) > jump) z(e) = diff(e) > 0 ? 1.0 : -1.0;

  if (mu > 0) {
    // Supplies the free edges must carry: D_F^T z_F = (y - theta)/mu - D_J^T z_J.
    const Eigen::VectorXd supply = (y - theta) / mu - graph_divergence(g, z);
    const int nodes = static_cast<int>(g.n());
    const int source = nodes, sink = nodes + 1;
    MaxFlow flow(nodes + 2);
    double scale = 1.0;
    for (Index v = 0; v < g.n(); ++v) {
      const double b = supply(v);
      scale = std::max(scale, std::abs(b));
      if (b > 0)
        flow.add_arc(source, static_cast<int>(v), b);
      else if (b < 0)
        flow.add_arc(static_cast<int>(v), sink, -b);
    }
    std::vector<std::pair<Index, int>> free_arcs;
    for (Index e = 0; e < g.m(); ++e) {
      if (std::abs(diff(e)) > jump) continue;
      const auto& edge = g.edges()[static_cast<std::size_t>(e)];
      free_arcs.emplace_back(e, flow.add_arc(static_cast<int>(edge.u), static_cast<int>(edge.v), 1.0, 1.0));
    }
    flow.solve(source, sink, 1e-14 * scale);
    for (auto [e, arc] : free_arcs) z(e) = std::clamp(flow.flow(arc), -1.0, 1.0);
  }
  return {z, stationarity(g, y, problem.lambda, theta, z)};
}

DenoiseResult denoise(const DenoiseProblem& problem, const DenoiseOptions& options) {
  const Graph& g = problem.graph;
  const Eigen::VectorXd& y = problem.y;
  if (y.size() != g.n())
    throw InvalidArgument("observation length " + std::to_string(y.size()) + " does not match n = " +
                          std::to_string(g.n()));
  if (!y.allFinite()) throw InvalidArgument("observation contains NaN or Inf");
  if (!(problem.lambda >= 0.0) || !std::isfinite(problem.lambda))
    throw InvalidArgument("lambda must be a finite nonnegative number");

  DenoiseResult result;
  if (!is_connected(g))
    result.warnings.push_back("graph is disconnected; the mean is preserved per component only");

  const double n = static_cast<double>(g.n());
  const double mu = problem.lambda * n / 2.0;
  const double scale = 1.0 + y.lpNorm<Eigen::Infinity>();

  SolverOutput sol;
  Algorithm algorithm = options.algorithm;
  if (algorithm == Algorithm::Auto) algorithm = g.is_complete() ? Algorithm::CompleteIsotonic : Algorithm::ParametricCut;
  if (algorithm == Algorithm::CompleteIsotonic && !g.is_complete())
    throw InvalidArgument("complete_isotonic requires a complete graph");

  if (mu == 0.0 || g.m() == 0) {
    sol.theta = y;
    sol.z = Eigen::VectorXd::Zero(g.m());
  } else {
    switch (algorithm) {
      case Algorithm::CompleteIsotonic: sol = solve_complete_isotonic(y, mu); break;
      case Algorithm::PrimalDual: sol = solve_primal_dual(g, y, mu, options); break;
      default: sol = solve_parametric_cut(g, y, mu); break;
    }
  }

  result.theta_hat = std::move(sol.theta);
  result.iterations = sol.iterations;
  result.objective = tv_objective(g, y, problem.lambda, result.theta_hat);

  if (options.certify) {
    auto cert = kkt_certificate(problem, result.theta_hat);
    const bool keep_native = algorithm == Algorithm::PrimalDual && sol.z.size() == g.m() &&
                             cert.residual > options.tol * scale;
    if (keep_native) {
      // an approximate theta can carry tiny spurious jumps; fall back to the
      // solver's own dual rather than report a failed certificate
      result.dual_z = std::move(sol.z);
      result.stationarity_residual = stationarity(g, y, problem.lambda, result.theta_hat, result.dual_z);
    } else {
      result.dual_z = std::move(cert.z);
      result.stationarity_residual = cert.residual;
    }
  } else if (sol.z.size() == g.m()) {
    result.dual_z = std::move(sol.z);
    result.stationarity_residual = stationarity(g, y, problem.lambda, result.theta_hat, result.dual_z);
  } else {
    result.stationarity_residual = kNaN;
  }
  result.dual_feasibility = result.dual_z.size() > 0 ? result.dual_z.lpNorm<Eigen::Infinity>() : 0.0;

  if (std::isnan(result.stationarity_residual)) {
    result.converged = sol.converged;
  } else {
    result.converged = sol.converged && result.stationarity_residual <= options.tol * scale &&
                       result.dual_feasibility <= 1.0 + options.tol;
  }
  if (!result.converged) result.warnings.push_back("optimality certificate not reached");
  return result;
}

// ---------------------------------------------------------------------------

const char* to_string(LambdaRuleKind kind) {
  switch (kind) {
    case LambdaRuleKind::TheoremGeneral: return "theorem_general";
    case LambdaRuleKind::Grid2D: return "grid2d";
    case LambdaRuleKind::GridHighDim: return "grid_high_dim";
    case LambdaRuleKind::Hypercube: return "hypercube";
    case LambdaRuleKind::Complete: return "complete";
    case LambdaRuleKind::Star: return "star";
    case LambdaRuleKind::RandomGap: return "random_gap";
    case LambdaRuleKind::CyclePower: return "cycle_power";
    case LambdaRuleKind::Manual: return "manual";
  }
  return "manual";
}

LambdaRuleKind lambda_rule_from_string(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '-', '_');
  for (auto k : {LambdaRuleKind::TheoremGeneral, LambdaRuleKind::Grid2D, LambdaRuleKind::GridHighDim,
                 LambdaRuleKind::Hypercube, LambdaRuleKind::Complete, LambdaRuleKind::Star, LambdaRuleKind::RandomGap,
                 LambdaRuleKind::CyclePower, LambdaRuleKind::Manual})
    if (key == to_string(k)) return k;
  if (key == "theorem") return LambdaRuleKind::TheoremGeneral;
  throw InvalidArgument("unknown lambda rule '" + name + "'");
}

double lambda_value(const LambdaRule& rule, const Graph& g, std::optional<double> rho) {
  if (rule.rule == LambdaRuleKind::Manual) {
    if (!(rule.manual_value >= 0.0)) throw InvalidArgument("manual lambda must be nonnegative");
    return rule.manual_value;
  }
  if (!(rule.sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  if (!(rule.delta > 0.0 && rule.delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
  if (!(rule.constant_c > 0.0)) throw InvalidArgument("constant c must be positive");

  constexpr double e = std::numbers::e;
  const double n = static_cast<double>(g.n());
  const double m = static_cast<double>(g.m());
  const double sc = rule.constant_c * rule.sigma;
  const double log_n_delta = std::log(e * n / rule.delta);
  switch (rule.rule) {
    case LambdaRuleKind::TheoremGeneral:
      if (!rho) throw InvalidArgument("theorem_general rule needs rho");
      return sc * *rho * std::sqrt(2.0 * std::log(e * m / rule.delta)) / n;
    case LambdaRuleKind::Grid2D:
      return sc * std::sqrt(std::log(n) * log_n_delta) / n;
    case LambdaRuleKind::GridHighDim:
    case LambdaRuleKind::Hypercube:
    case LambdaRuleKind::Star:
      return sc * std::sqrt(log_n_delta) / n;
    case LambdaRuleKind::Complete:
      return sc * std::sqrt(log_n_delta) / (n * n);
    case LambdaRuleKind::RandomGap: {
      double d = 2.0 * m / n;
      if (g.family().kind == FamilyKind::ErdosRenyi) d = g.family().p * (n - 1.0);
      if (g.family().kind == FamilyKind::RandomRegular) d = g.family().degree;
      return sc * std::sqrt(std::log(e * d * n / rule.delta)) / (d * n);
    }
    case LambdaRuleKind::CyclePower: {
      const double k = g.family().power > 0 ? g.family().power : m / n;
      return sc * std::sqrt(log_n_delta) / std::min(std::sqrt(n) * k * k * k, n);
    }
    case LambdaRuleKind::Manual: break;
  }
  return rule.manual_value;
}

}  // namespace graphtv
