// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_MAXFLOW_HPP
#define GRAPHTV_MAXFLOW_HPP

#include <vector>

namespace graphtv {

/// Dinic max-flow over real capacities. Residual capacities at or below
/// `eps` are treated as saturated.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  int nodes() const { return static_cast<int>(adj_.size()); }

  /// Adds u->v with capacity `cap` and v->u with `reverse_cap`; returns the
  /// arc id of u->v. Undirected edges use cap == reverse_cap.
  int add_arc(int from, int to, double cap, double reverse_cap = 0.0);

  double solve(int source, int sink, double eps);

  /// Net flow pushed along arc `arc` (negative if it runs backwards).
  double flow(int arc) const { return initial_[static_cast<std::size_t>(arc)] - arcs_[static_cast<std::size_t>(arc)].cap; }

  /// Nodes reachable from `source` in the residual graph after solve().
  std::vector<char> reachable_from(int source) const;

 private:
  struct Arc {
    int to;
    double cap;
  };

  bool build_levels(int source, int sink);

  std::vector<Arc> arcs_;  // arc i and i ^ 1 are mutual reverses
  std::vector<double> initial_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  double eps_ = 0.0;
};

}  // namespace graphtv

#endif  // GRAPHTV_MAXFLOW_HPP
