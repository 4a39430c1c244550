// SPDX-License-Identifier: Apache-2.0

#include "graphtv/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace graphtv {

MaxFlow::MaxFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

int MaxFlow::add_arc(int from, int to, double cap, double reverse_cap) {
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, cap});
  arcs_.push_back({from, reverse_cap});
  initial_.push_back(cap);
  initial_.push_back(reverse_cap);
  adj_[static_cast<std::size_t>(from)].push_back(id);
  adj_[static_cast<std::size_t>(to)].push_back(id + 1);
  return id;
}

bool MaxFlow::build_levels(int source, int sink) {
  level_.assign(adj_.size(), -1);
  std::queue<int> q;
  level_[static_cast<std::size_t>(source)] = 0;
  q.push(source);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int a : adj_[static_cast<std::size_t>(u)]) {
      const auto& arc = arcs_[static_cast<std::size_t>(a)];
      if (arc.cap > eps_ && level_[static_cast<std::size_t>(arc.to)] < 0) {
        level_[static_cast<std::size_t>(arc.to)] = level_[static_cast<std::size_t>(u)] + 1;
        q.push(arc.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(sink)] >= 0;
}

double MaxFlow::solve(int source, int sink, double eps) {
  eps_ = eps;
  double total = 0.0;
  std::vector<int> path;
  while (build_levels(source, sink)) {
    cursor_.assign(adj_.size(), 0);
    for (;;) {
      // Walk current arcs from the source; retreat from dead ends.
      path.clear();
      int u = source;
      while (u != sink) {
        auto& cur = cursor_[static_cast<std::size_t>(u)];
        const auto& out = adj_[static_cast<std::size_t>(u)];
        bool advanced = false;
        while (cur < out.size()) {
          const int a = out[cur];
          const auto& arc = arcs_[static_cast<std::size_t>(a)];
          if (arc.cap > eps_ && level_[static_cast<std::size_t>(arc.to)] == level_[static_cast<std::size_t>(u)] + 1) {
            path.push_back(a);
            u = arc.to;
            advanced = true;
            break;
          }
          ++cur;
        }
        if (advanced) continue;
        level_[static_cast<std::size_t>(u)] = -1;
        if (path.empty()) break;
        const int back = path.back();
        path.pop_back();
        u = arcs_[static_cast<std::size_t>(back ^ 1)].to;
        ++cursor_[static_cast<std::size_t>(u)];
      }
      if (u != sink) break;
      double push = std::numeric_limits<double>::infinity();
      for (int a : path) push = std::min(push, arcs_[static_cast<std::size_t>(a)].cap);
      for (int a : path) {
        arcs_[static_cast<std::size_t>(a)].cap -= push;
        arcs_[static_cast<std::size_t>(a ^ 1)].cap += push;
      }
      total += push;
    }
  }
  return total;
}

std::vector<char> MaxFlow::reachable_from(int source) const {
  std::vector<char> seen(adj_.size(), 0);
  std::vector<int> stack{source};
  seen[static_cast<std::size_t>(source)] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int a : adj_[static_cast<std::size_t>(u)]) {
      const auto& arc = arcs_[static_cast<std::size_t>(a)];
      if (arc.cap > eps_ && !seen[static_cast<std::size_t>(arc.to)]) {
        seen[static_cast<std::size_t>(arc.to)] = 1;
        stack.push_back(arc.to);
      }
    }
  }
  return seen;
}

}  // namespace graphtv
