// SPDX-License-Identifier: Apache-2.0

#include "graphtv/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>

#include "graphtv/errors.hpp"

namespace graphtv {

namespace {

constexpr double kRankCutoff = 1e-10;

// Largest tensor the structured eigensum will allocate.
constexpr Index kMaxTensorEntries = Index{1} << 27;

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen_laplacian(const IncidenceMatrix& d, Index cap) {
  if (d.cols() > cap)
    throw SizeLimitError("dense spectral routine limited to n <= " + std::to_string(cap) + " (got n = " +
                         std::to_string(d.cols()) + "); use the structured method for grids");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian_dense(d));
  if (solver.info() != Eigen::Success) throw NumericalFailure("Laplacian eigendecomposition failed");
  return solver;
}

// Contract mode `mode` of a column-major tensor with `dims` against P (new_dim x dims[mode]).
Eigen::VectorXd contract_mode(const Eigen::VectorXd& in, std::vector<Index>& dims, int mode,
                              const Eigen::MatrixXd& p) {
  Index inner = 1, outer = 1;
  for (int l = 0; l < mode; ++l) inner *= dims[static_cast<std::size_t>(l)];
  for (std::size_t l = static_cast<std::size_t>(mode) + 1; l < dims.size(); ++l) outer *= dims[l];
  const Index old_dim = dims[static_cast<std::size_t>(mode)];
  const Index new_dim = p.rows();
  Eigen::VectorXd out(inner * new_dim * outer);
  for (Index o = 0; o < outer; ++o) {
    Eigen::Map<const Eigen::MatrixXd> block(in.data() + o * inner * old_dim, inner, old_dim);
    Eigen::Map<Eigen::MatrixXd> dst(out.data() + o * inner * new_dim, inner, new_dim);
    dst.noalias() = block * p.transpose();
  }
  dims[static_cast<std::size_t>(mode)] = new_dim;
  return out;
}

}  // namespace

const char* to_string(RhoMethod method) {
  switch (method) {
    case RhoMethod::Auto: return "auto";
    case RhoMethod::DensePseudoinverse: return "dense";
    case RhoMethod::EigensumStructured: return "structured";
  }
  return "auto";
}

RhoMethod rho_method_from_string(const std::string& name) {
  if (name == "auto") return RhoMethod::Auto;
  if (name == "dense" || name == "dense_pseudoinverse") return RhoMethod::DensePseudoinverse;
  if (name == "structured" || name == "eigensum") return RhoMethod::EigensumStructured;
  throw InvalidArgument("unknown rho method '" + name + "' (expected dense|structured|auto)");
}

PathEigenpairs<double> path_eigenpairs(Index N) {
  if (N < 2) throw InvalidArgument("path eigenpairs need N >= 2");
  return PathEigenpairs<double>{N};
}

Eigen::VectorXd circulant_eigenvalues(Index n, int k) {
  if (n < 3 || k < 1 || 2 * static_cast<Index>(k) > n)
    throw InvalidArgument("circulant eigenvalues need n >= 3 and 1 <= k <= n/2");
  Eigen::VectorXd lambda(n);
  for (Index m = 0; m < n; ++m) {
    double s = 0.0;
    for (int l = 1; l <= k; ++l) s += 1.0 - std::cos(2.0 * std::numbers::pi * l * m / static_cast<double>(n));
    // At k = n/2 the antipodal neighbour is a single edge, not two.
    if (2 * static_cast<Index>(k) == n) s -= 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(m)));
    lambda(m) = 2.0 * s;
  }
  return lambda;
}

Eigen::MatrixXd laplacian_dense(const IncidenceMatrix& d) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d.cols(), d.cols());
  for (Index r = 0; r < d.outerSize(); ++r)
    for (IncidenceMatrix::InnerIterator a(d, r); a; ++a)
      for (IncidenceMatrix::InnerIterator b(d, r); b; ++b) l(a.col(), b.col()) += a.value() * b.value();
  return l;
}

PseudoinverseColumns pseudoinverse_columns_dense(const IncidenceMatrix& d, Index cap) {
  const auto solver = eigen_laplacian(d, cap);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double cutoff = kRankCutoff * std::max(lambda.maxCoeff(), 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  for (Index k = 0; k < lambda.size(); ++k)
    if (lambda(k) > cutoff) inv(k) = 1.0 / lambda(k);
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::MatrixXd lpinv = v * inv.asDiagonal() * v.transpose();
  return PseudoinverseColumns{lpinv * Eigen::MatrixXd(d.transpose())};
}

SpectralReport rho_dense(const IncidenceMatrix& d, Index cap) {
  const auto solver = eigen_laplacian(d, cap);
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double cutoff = kRankCutoff * std::max(lambda.maxCoeff(), 0.0);
  Eigen::VectorXd inv2 = Eigen::VectorXd::Zero(lambda.size());
  for (Index k = 0; k < lambda.size(); ++k)
    if (lambda(k) > cutoff) inv2(k) = 1.0 / (lambda(k) * lambda(k));
  const Eigen::MatrixXd& v = solver.eigenvectors();
  // ||s_e||^2 = d_e^T (L^+)^2 d_e, so one n x n product serves every column.
  const Eigen::MatrixXd gram = v * inv2.asDiagonal() * v.transpose();

  double best = 0.0;
  for (Index r = 0; r < d.outerSize(); ++r) {
    double s = 0.0;
    for (IncidenceMatrix::InnerIterator a(d, r); a; ++a)
      for (IncidenceMatrix::InnerIterator b(d, r); b; ++b) s += a.value() * b.value() * gram(a.col(), b.col());
    best = std::max(best, s);
  }

  SpectralReport report;
  report.graph_n = d.cols();
  report.graph_m = d.rows();
  report.rho = std::sqrt(best);
  report.rho_method = RhoMethod::DensePseudoinverse;
  report.eigenvalues = lambda;
  if (lambda.size() >= 2) report.spectral_gap = lambda(1);
  return report;
}

Eigen::VectorXd grid_column_norms_squared(int d, Index side) {
  if (d < 1 || side < 2) throw InvalidArgument("structured eigensum needs d >= 1 and N >= 2");
  Index total = 1;
  for (int j = 0; j < d; ++j) {
    if (total > kMaxTensorEntries / side)
      throw SizeLimitError("grid too large for the structured eigensum");
    total *= side;
  }
  const auto pairs = path_eigenpairs(side);
  const Eigen::VectorXd lambda = pairs.eigenvalues();
  const Eigen::MatrixXd v = pairs.eigenvectors();

  // a(i, k) = <v_k, d_i>^2 for the path edges, b(i, k) = <v_k, e_i>^2.
  Eigen::MatrixXd a(side - 1, side);
  for (Index i = 0; i + 1 < side; ++i)
    for (Index k = 0; k < side; ++k) a(i, k) = std::pow(v(i, k) - v(i + 1, k), 2);
  const Eigen::MatrixXd b = v.array().square().matrix();

  // Weights (sum_j lambda_{k_j})^{-2} over multi-indices k, zero at k = 0.
  Eigen::VectorXd w(total);
  for (Index flat = 0; flat < total; ++flat) {
    double s = 0.0;
    Index rest = flat;
    for (int j = 0; j < d; ++j) {
      s += lambda(rest % side);
      rest /= side;
    }
    w(flat) = flat == 0 ? 0.0 : 1.0 / (s * s);
  }

  // Columns for edges along axis 0; other axes follow by symmetry of the weights.
  std::vector<Index> dims(static_cast<std::size_t>(d), side);
  Eigen::VectorXd t = contract_mode(w, dims, 0, a);
  for (int j = 1; j < d; ++j) t = contract_mode(t, dims, j, b);

  const Graph grid = build_grid(d, side);
  Eigen::VectorXd out(grid.m());
  std::vector<Index> coord(static_cast<std::size_t>(d));
  Index row = 0;
  for (const auto& e : grid.edges()) {
    const Index diff = e.v - e.u;
    int axis = 0;
    for (Index stride = 1; stride != diff; stride *= side) ++axis;
    Index rest = e.u;
    for (int j = 0; j < d; ++j) {
      coord[static_cast<std::size_t>(j)] = rest % side;
      rest /= side;
    }
    std::swap(coord[0], coord[static_cast<std::size_t>(axis)]);
    Index flat = 0;
    for (int j = d - 1; j >= 0; --j) flat = flat * dims[static_cast<std::size_t>(j)] + coord[static_cast<std::size_t>(j)];
    out(row++) = t(flat);
  }
  return out;
}

SpectralReport rho(const Graph& g, RhoMethod method, Index cap) {
  const bool is_grid = g.family().kind == FamilyKind::Grid || g.family().kind == FamilyKind::Hypercube;
  if (method == RhoMethod::Auto) method = is_grid ? RhoMethod::EigensumStructured : RhoMethod::DensePseudoinverse;

  SpectralReport report;
  if (method == RhoMethod::EigensumStructured) {
    if (!is_grid)
      throw UnsupportedMethod(std::string("structured eigensum is only available for grids and hypercubes, not ") +
                              to_string(g.family().kind));
    const Eigen::VectorXd norms2 = grid_column_norms_squared(g.family().dim, g.family().side);
    report.graph_n = g.n();
    report.graph_m = g.m();
    report.rho = std::sqrt(norms2.maxCoeff());
    report.rho_method = RhoMethod::EigensumStructured;
    // lambda_2 of a Kronecker sum is the smallest nonzero path eigenvalue.
    report.spectral_gap = path_eigenpairs(g.family().side).eigenvalue(1);
  } else {
    report = rho_dense(incidence(g), cap);
  }
  report.family = to_string(g.family().kind);
  report.kappa_lower_bound = kappa_lower_bound(g.max_degree(), g.m());
  return report;
}

double kappa_lower_bound(Index max_degree, Index t_size) {
  if (t_size == 0) return 1.0;
  const double m = std::min(std::sqrt(static_cast<double>(max_degree)), std::sqrt(static_cast<double>(t_size)));
  return 1.0 / (2.0 * m);
}

double kappa_exact_bruteforce(const IncidenceMatrix& d, const std::vector<Index>& edge_subset) {
  const std::size_t t = edge_subset.size();
  if (t == 0) return 1.0;
  if (t > 20) throw SizeLimitError("kappa brute force enumerates 2^|T| signs; |T| must be <= 20");

  // Compress the vertices touched by T.
  std::map<Index, Index> local;
  std::vector<std::vector<std::pair<Index, double>>> rows(t);
  for (std::size_t r = 0; r < t; ++r) {
    const Index e = edge_subset[r];
    if (e < 0 || e >= d.rows()) throw InvalidArgument("edge index out of range in kappa_exact_bruteforce");
    for (IncidenceMatrix::InnerIterator it(d, e); it; ++it) {
      auto [pos, inserted] = local.try_emplace(it.col(), static_cast<Index>(local.size()));
      rows[r].emplace_back(pos->second, it.value());
    }
  }

  // Gray-code walk over signs with s_0 fixed to +1 (the norm is even in s).
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Index>(local.size()));
  for (const auto& row : rows)
    for (auto [c, val] : row) acc(c) += val;
  double best = acc.squaredNorm();
  std::vector<int> sign(t, 1);
  const std::uint64_t patterns = std::uint64_t{1} << (t - 1);
  for (std::uint64_t step = 1; step < patterns; ++step) {
    const auto flip = static_cast<std::size_t>(std::countr_zero(step)) + 1;
    for (auto [c, val] : rows[flip]) acc(c) -= 2.0 * sign[flip] * val;
    sign[flip] = -sign[flip];
    best = std::max(best, acc.squaredNorm());
  }
  return std::sqrt(static_cast<double>(t)) / std::sqrt(best);
}

SpectralGap spectral_gap(const IncidenceMatrix& d, Index cap) {
  if (d.cols() < 2) throw InvalidArgument("spectral gap needs at least two vertices");
  const auto solver = eigen_laplacian(d, cap);
  const double l2 = solver.eigenvalues()(1);
  return {l2, l2 > 0 ? std::sqrt(2.0) / l2 : std::numeric_limits<double>::infinity()};
}

}  // namespace graphtv
