// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_SPECTRAL_HPP
#define GRAPHTV_SPECTRAL_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphtv/graph.hpp"

namespace graphtv {

enum class RhoMethod {
  Auto,                // structured for grids and hypercubes, dense otherwise
  DensePseudoinverse,
  EigensumStructured,
};

const char* to_string(RhoMethod method);
RhoMethod rho_method_from_string(const std::string& name);

/// Spectral constants of an incidence matrix.
struct SpectralReport {
  Index graph_n = 0;
  Index graph_m = 0;
  double rho = 0.0;
  RhoMethod rho_method = RhoMethod::DensePseudoinverse;
  /// 1 / (2 min(sqrt(d_max), sqrt(m))), the compatibility bound at T = E.
  double kappa_lower_bound = 1.0;
  /// Sorted Laplacian spectrum, when the dense route computed it.
  std::optional<Eigen::VectorXd> eigenvalues;
  std::optional<double> spectral_gap;
  std::string family;
};

/// Laplacian spectrum of the path P_N: lambda_k = 2 - 2 cos(k pi / N), with
/// the orthonormal DCT-II eigenvectors.
template <typename Scalar = double>
struct PathEigenpairs {
  Index N;

  Scalar eigenvalue(Index k) const {
    return Scalar(2) - Scalar(2) * std::cos(Scalar(k) * std::numbers::pi_v<Scalar> / Scalar(N));
  }

  /// (v_k)_j for 0-based j.
  Scalar vector_entry(Index k, Index j) const {
    if (k == 0) return Scalar(1) / std::sqrt(Scalar(N));
    return std::sqrt(Scalar(2) / Scalar(N)) *
           std::cos((Scalar(j) + Scalar(0.5)) * Scalar(k) * std::numbers::pi_v<Scalar> / Scalar(N));
  }

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eigenvalues() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(N);
    for (Index k = 0; k < N; ++k) out(k) = eigenvalue(k);
    return out;
  }

  /// Columns are eigenvectors.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v(N, N);
    for (Index k = 0; k < N; ++k)
      for (Index j = 0; j < N; ++j) v(j, k) = vector_entry(k, j);
    return v;
  }
};

/// Throws InvalidArgument for N < 2.
PathEigenpairs<double> path_eigenpairs(Index N);

/// Laplacian spectrum of C_n^k in Fourier order: 2 sum_{l=1..k} (1 - cos(2 pi l m / n)).
Eigen::VectorXd circulant_eigenvalues(Index n, int k);

/// Dense Laplacian D^T D.
Eigen::MatrixXd laplacian_dense(const IncidenceMatrix& d);

/// Columns of S = D^+ as an n x m matrix.
struct PseudoinverseColumns {
  Eigen::MatrixXd columns;

  Index size() const { return columns.cols(); }
  Eigen::VectorXd column_norms() const { return columns.colwise().norm().transpose(); }
};

inline constexpr Index kDenseSizeCap = 4096;

/// S = (D^T D)^+ D^T from the eigendecomposition of D^T D, dropping
/// eigenvalues below 1e-10 * lambda_max. Throws SizeLimitError above `cap`.
PseudoinverseColumns pseudoinverse_columns_dense(const IncidenceMatrix& d, Index cap = kDenseSizeCap);

/// rho = max_j ||s_j||_2 from the dense route; fills eigenvalues and spectral gap.
/// Works for any incidence-like matrix, including the augmented path.
SpectralReport rho_dense(const IncidenceMatrix& d, Index cap = kDenseSizeCap);

/// Squared column norms of D^+ for the grid (d, N) via the tensor-product
/// eigenbasis. Result is indexed like the edges of build_grid(d, N).
Eigen::VectorXd grid_column_norms_squared(int d, Index side);

/// rho for a graph. EigensumStructured requires a Grid or Hypercube family and
/// throws UnsupportedMethod otherwise.
SpectralReport rho(const Graph& g, RhoMethod method = RhoMethod::Auto, Index cap = kDenseSizeCap);

/// 1 / (2 min(sqrt(max_degree), sqrt(t_size))); 1 when t_size == 0.
double kappa_lower_bound(Index max_degree, Index t_size);

/// kappa_T = sqrt(|T|) / max_{s in {-1,1}^T} ||D_T^T s||_2 by enumeration.
/// `edge_subset` holds row indices of d. Throws SizeLimitError for |T| > 20.
double kappa_exact_bruteforce(const IncidenceMatrix& d, const std::vector<Index>& edge_subset);

struct SpectralGap {
  double lambda2;
  /// sqrt(2) / lambda2, an upper bound on rho for connected graphs.
  double rho_bound;
};

/// Second-smallest Laplacian eigenvalue (dense).
SpectralGap spectral_gap(const IncidenceMatrix& d, Index cap = kDenseSizeCap);

}  // namespace graphtv

#endif  // GRAPHTV_SPECTRAL_HPP
