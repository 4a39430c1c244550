// SPDX-License-Identifier: Apache-2.0

#include "graphtv/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "graphtv/errors.hpp"
#include "graphtv/random.hpp"

namespace graphtv {

namespace {

struct FamilyName {
  FamilyKind kind;
  const char* name;
};

constexpr FamilyName kFamilyNames[] = {
    {FamilyKind::Path, "path"},
    {FamilyKind::Grid, "grid"},
    {FamilyKind::Hypercube, "hypercube"},
    {FamilyKind::Complete, "complete"},
    {FamilyKind::Star, "star"},
    {FamilyKind::CyclePower, "cycle_power"},
    {FamilyKind::ErdosRenyi, "erdos_renyi"},
    {FamilyKind::RandomRegular, "random_regular"},
    {FamilyKind::Custom, "custom"},
};

// Largest grid we agree to build; keeps n and m well inside Index.
constexpr Index kMaxVertices = Index{1} << 31;

}  // namespace

const char* to_string(FamilyKind kind) {
  for (const auto& f : kFamilyNames)
    if (f.kind == kind) return f.name;
  return "custom";
}

FamilyKind family_kind_from_string(const std::string& name) {
  std::string key = name;
  std::replace(key.begin(), key.end(), '-', '_');
  for (const auto& f : kFamilyNames)
    if (key == f.name) return f.kind;
  if (key == "er") return FamilyKind::ErdosRenyi;
  if (key == "regular") return FamilyKind::RandomRegular;
  throw InvalidArgument("unknown graph family '" + name + "'");
}

Graph::Graph(Index n, std::vector<Edge> edges, Family family)
    : n_(n), edges_(std::move(edges)), family_(family) {
  if (n_ < 1) throw InvalidArgument("graph needs at least one vertex");
  for (auto& e : edges_) {
    if (e.u == e.v) throw InvalidArgument("self-loop at vertex " + std::to_string(e.u + 1));
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n_)
      throw InvalidArgument("edge (" + std::to_string(e.u + 1) + ", " + std::to_string(e.v + 1) +
                            ") out of range for n = " + std::to_string(n_));
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end())
    throw InvalidArgument("duplicate edge (" + std::to_string(dup->u + 1) + ", " +
                          std::to_string(dup->v + 1) + ")");
}

std::vector<Index> Graph::degrees() const {
  std::vector<Index> deg(static_cast<std::size_t>(n_), 0);
  for (const auto& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  return deg;
}

Index Graph::max_degree() const {
  const auto deg = degrees();
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<std::vector<Graph::Incident>> Graph::adjacency() const {
  std::vector<std::vector<Incident>> adj(static_cast<std::size_t>(n_));
  for (Index id = 0; id < m(); ++id) {
    const auto& e = edges_[static_cast<std::size_t>(id)];
    adj[static_cast<std::size_t>(e.u)].push_back({e.v, id});
    adj[static_cast<std::size_t>(e.v)].push_back({e.u, id});
  }
  return adj;
}

Graph build_path(Index n) {
  if (n < 2) throw InvalidArgument("path graph needs N >= 2");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges), Family{.kind = FamilyKind::Path, .dim = 1, .side = static_cast<int>(n)});
}

IncidenceMatrix build_augmented_path(Index n) {
  if (n < 1) throw InvalidArgument("augmented path needs N >= 1");
  std::vector<Eigen::Triplet<double>> entries;
  entries.emplace_back(0, 0, 1.0);
  for (Index i = 1; i < n; ++i) {
    entries.emplace_back(i, i, 1.0);
    entries.emplace_back(i, i - 1, -1.0);
  }
  IncidenceMatrix d(n, n);
  d.setFromTriplets(entries.begin(), entries.end());
  return d;
}

Graph build_grid(int d, Index side) {
  if (d < 1) throw InvalidArgument("grid dimension must be >= 1");
  if (side < 2) throw InvalidArgument("grid side length must be >= 2");
  Index n = 1;
  for (int j = 0; j < d; ++j) {
    if (n > kMaxVertices / side)
      throw InvalidArgument("grid " + std::to_string(side) + "^" + std::to_string(d) +
                            " exceeds the supported vertex count");
    n *= side;
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(n / side * (side - 1)));
  for (Index v = 0; v < n; ++v) {
    Index stride = 1;
    Index rest = v;
    for (int j = 0; j < d; ++j) {
      if (rest % side < side - 1) edges.push_back({v, v + stride});
      rest /= side;
      stride *= side;
    }
  }
  return Graph(n, std::move(edges), Family{.kind = FamilyKind::Grid, .dim = d, .side = static_cast<int>(side)});
}

Graph build_hypercube(int d) {
  if (d < 1) throw InvalidArgument("hypercube dimension must be >= 1");
  if (d > 30) throw InvalidArgument("hypercube dimension too large");
  Graph grid = build_grid(d, 2);
  return Graph(grid.n(), grid.edges(), Family{.kind = FamilyKind::Hypercube, .dim = d, .side = 2});
}

Graph build_complete(Index n) {
  if (n < 2) throw InvalidArgument("complete graph needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(n, std::move(edges), Family{.kind = FamilyKind::Complete});
}

Graph build_star(Index n) {
  if (n < 2) throw InvalidArgument("star graph needs n >= 2");
  std::vector<Edge> edges;
  for (Index j = 1; j < n; ++j) edges.push_back({0, j});
  return Graph(n, std::move(edges), Family{.kind = FamilyKind::Star});
}

Graph build_cycle_power(Index n, int k) {
  if (n < 3) throw InvalidArgument("cycle power needs n >= 3");
  if (k < 1 || 2 * static_cast<Index>(k) > n)
    throw InvalidArgument("cycle power needs 1 <= k <= n/2, got k = " + std::to_string(k));
  std::vector<Edge> edges;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const Index dist = std::min(j - i, n - (j - i));
      if (dist <= k) edges.push_back({i, j});
    }
  return Graph(n, std::move(edges), Family{.kind = FamilyKind::CyclePower, .power = k});
}

Graph build_erdos_renyi(Index n, double p, std::uint64_t seed, int max_retries) {
  if (n < 2) throw InvalidArgument("Erdos-Renyi graph needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("Erdos-Renyi needs 0 < p <= 1");
  const Family family{.kind = FamilyKind::ErdosRenyi, .p = p, .seed = seed};
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Rng rng(seed, static_cast<std::uint64_t>(attempt));
    std::vector<Edge> edges;
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j)
        if (rng.uniform() < p) edges.push_back({i, j});
    Graph g(n, std::move(edges), family);
    if (is_connected(g)) return g;
  }
  std::ostringstream msg;
  msg << "no connected Erdos-Renyi draw with n = " << n << ", p = " << p << " after "
      << max_retries << " attempts";
  throw GenerationFailure(msg.str());
}

Graph build_random_regular(Index n, int d, std::uint64_t seed, int max_restarts) {
  if (d < 1 || d >= n) throw InvalidArgument("random regular graph needs 1 <= d < n");
  if ((n * d) % 2 != 0) throw InvalidArgument("random regular graph needs n*d even");
  const Family family{.kind = FamilyKind::RandomRegular, .degree = d, .seed = seed};
  const auto total = static_cast<std::size_t>(n * d);

  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    Rng rng(seed, static_cast<std::uint64_t>(attempt));
    // Point p belongs to vertex p / d. Unpaired points are kept in `free`.
    std::vector<Index> free(total);
    std::iota(free.begin(), free.end(), Index{0});
    std::vector<std::vector<Index>> nbrs(static_cast<std::size_t>(n));
    std::vector<Edge> edges;
    edges.reserve(total / 2);

    auto suitable = [&](Index a, Index b) {
      const Index u = a / d, v = b / d;
      if (u == v) return false;
      const auto& nu = nbrs[static_cast<std::size_t>(u)];
      return std::find(nu.begin(), nu.end(), v) == nu.end();
    };

    bool stuck = false;
    while (!free.empty() && !stuck) {
      const std::size_t f = free.size();
      bool paired = false;
      for (int tries = 0; tries < 64 && !paired; ++tries) {
        const auto ia = static_cast<std::size_t>(rng.uniform_int(f));
        const auto ib = static_cast<std::size_t>(rng.uniform_int(f));
        if (ia == ib || !suitable(free[ia], free[ib])) continue;
        const Index u = free[ia] / d, v = free[ib] / d;
        nbrs[static_cast<std::size_t>(u)].push_back(v);
        nbrs[static_cast<std::size_t>(v)].push_back(u);
        edges.push_back({u, v});
        // Remove the larger position first so the smaller stays valid.
        for (auto idx : {std::max(ia, ib), std::min(ia, ib)}) {
          free[idx] = free.back();
          free.pop_back();
        }
        paired = true;
      }
      if (paired) continue;
      // Random probing failed; look for any suitable pair before giving up on this attempt.
      stuck = true;
      for (std::size_t a = 0; a < f && stuck; ++a)
        for (std::size_t b = a + 1; b < f; ++b)
          if (suitable(free[a], free[b])) {
            stuck = false;
            break;
          }
    }
    if (!stuck) return Graph(n, std::move(edges), family);
  }
  throw GenerationFailure("random " + std::to_string(d) + "-regular graph on " + std::to_string(n) +
                          " vertices: pairing model failed " + std::to_string(max_restarts) + " times");
}

IncidenceMatrix incidence(const Graph& g) {
  IncidenceMatrix d(g.m(), g.n());
  d.reserve(Eigen::VectorXi::Constant(g.m(), 2));
  Index row = 0;
  for (const auto& e : g.edges()) {
    d.insert(row, e.u) = 1.0;
    d.insert(row, e.v) = -1.0;
    ++row;
  }
  d.makeCompressed();
  return d;
}

std::vector<Index> connected_components(const Graph& g, Index* count) {
  // Union-find with path halving.
  std::vector<Index> parent(static_cast<std::size_t>(g.n()));
  std::iota(parent.begin(), parent.end(), Index{0});
  auto find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto& px = parent[static_cast<std::size_t>(x)];
      px = parent[static_cast<std::size_t>(px)];
      x = px;
    }
    return x;
  };
  for (const auto& e : g.edges()) {
    const Index a = find(e.u), b = find(e.v);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<Index> label(static_cast<std::size_t>(g.n()), -1);
  std::vector<Index> root_label(static_cast<std::size_t>(g.n()), -1);
  Index next = 0;
  for (Index v = 0; v < g.n(); ++v) {
    const Index r = find(v);
    auto& rl = root_label[static_cast<std::size_t>(r)];
    if (rl < 0) rl = next++;
    label[static_cast<std::size_t>(v)] = rl;
  }
  if (count) *count = next;
  return label;
}

bool is_connected(const Graph& g) {
  Index count = 0;
  connected_components(g, &count);
  return count == 1;
}

Graph read_edge_list(std::istream& in, Index n_hint) {
  std::vector<Edge> edges;
  Index n = n_hint;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long i = 0, j = 0;
    if (!(fields >> i)) continue;  // blank line
    if (!(fields >> j))
      throw InvalidArgument("edge list line " + std::to_string(lineno) + ": expected two indices");
    std::string extra;
    if (fields >> extra)
      throw InvalidArgument("edge list line " + std::to_string(lineno) + ": trailing data '" + extra + "'");
    if (i < 1 || j < 1)
      throw InvalidArgument("edge list line " + std::to_string(lineno) + ": indices are 1-based");
    edges.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1)});
    n = std::max<Index>(n, static_cast<Index>(std::max(i, j)));
  }
  if (n < 1) throw InvalidArgument("edge list is empty");
  return Graph(n, std::move(edges), Family{.kind = FamilyKind::Custom});
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# " << to_string(g.family().kind) << " n=" << g.n() << " m=" << g.m() << '\n';
  for (const auto& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << '\n';
}

}  // namespace graphtv
