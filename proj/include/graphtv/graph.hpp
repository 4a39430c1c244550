// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_GRAPH_HPP
#define GRAPHTV_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace graphtv {

using Index = Eigen::Index;

/// Edge-vertex incidence matrix. One row per edge: +1 at the lower vertex,
/// -1 at the higher one. Row major so that row access is cheap.
using IncidenceMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class FamilyKind {
  Path,
  Grid,
  Hypercube,
  Complete,
  Star,
  CyclePower,
  ErdosRenyi,
  RandomRegular,
  Custom,
};

const char* to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);

/// Which constructor produced a graph, and with what parameters.
/// Unused fields stay at zero.
struct Family {
  FamilyKind kind = FamilyKind::Custom;
  int dim = 0;           // Grid, Hypercube
  int side = 0;          // Grid
  int power = 0;         // CyclePower
  int degree = 0;        // RandomRegular
  double p = 0.0;        // ErdosRenyi
  std::uint64_t seed = 0;  // random families
};

/// Undirected edge stored as (u, v) with u < v, 0-based vertices.
struct Edge {
  Index u;
  Index v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph with a canonical (lexicographically sorted) edge list.
/// Immutable once built.
class Graph {
 public:
  /// Normalises each pair to (min, max) and sorts. Throws InvalidArgument on
  /// self-loops, duplicate edges or out-of-range endpoints.
  Graph(Index n, std::vector<Edge> edges, Family family = {});

  Index n() const { return n_; }
  Index m() const { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Family& family() const { return family_; }

  std::vector<Index> degrees() const;
  Index max_degree() const;

  /// Adjacency lists: for each vertex, (neighbour, edge id) pairs.
  struct Incident {
    Index neighbor;
    Index edge;
  };
  std::vector<std::vector<Incident>> adjacency() const;

  bool is_complete() const { return m() == n_ * (n_ - 1) / 2; }

 private:
  Index n_;
  std::vector<Edge> edges_;
  Family family_;
};

Graph build_path(Index n);

/// Square N x N matrix: first row picks theta_1, row i is theta_i - theta_{i-1}.
IncidenceMatrix build_augmented_path(Index n);

/// d-dimensional grid with side N. Vertex (i_1, ..., i_d) is stored at
/// i_1 + N i_2 + N^2 i_3 + ... (column major).
Graph build_grid(int d, Index side);

/// Hypercube {0,1}^d; identical vertex labelling to build_grid(d, 2).
Graph build_hypercube(int d);

Graph build_complete(Index n);

/// Vertex 0 is the centre.
Graph build_star(Index n);

/// k-th power of the cycle C_n; requires 1 <= k <= n/2.
Graph build_cycle_power(Index n, int k);

/// G(n, p) conditioned on connectivity by resampling up to `max_retries` times.
Graph build_erdos_renyi(Index n, double p, std::uint64_t seed, int max_retries = 100);

/// Random d-regular graph from the pairing model.
Graph build_random_regular(Index n, int d, std::uint64_t seed, int max_restarts = 1000);

IncidenceMatrix incidence(const Graph& g);

bool is_connected(const Graph& g);

/// Component label per vertex, labels numbered from 0 in order of first vertex.
std::vector<Index> connected_components(const Graph& g, Index* count = nullptr);

/// Edge list text: one "i j" pair per line, 1-based, '#' starts a comment.
/// n is the largest index seen unless `n_hint` is larger.
Graph read_edge_list(std::istream& in, Index n_hint = 0);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace graphtv

#endif  // GRAPHTV_GRAPH_HPP
