// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_HAAR_HPP
#define GRAPHTV_HAAR_HPP

#include <cmath>

#include <Eigen/Dense>

#include "graphtv/graph.hpp"

namespace graphtv {

bool is_power_of_two(Index n);

/// Orthonormal Haar transform of a length-N signal, N = 2^M.
/// Coefficient order: scaling coefficient, then levels m = 0..M-1 (coarse to
/// fine), shifts k = 0..2^m-1 within a level.
Eigen::VectorXd haar_transform_1d(const Eigen::VectorXd& x);
Eigen::VectorXd haar_inverse_1d(const Eigen::VectorXd& c);

/// Orthonormal bivariate Haar transform of an N x N image (x(i1, i2)).
/// Order: h0, then (j, e, k1, k2) lexicographic with e in {(0,1), (1,0), (1,1)};
/// e_1 acts on the first index. The first coefficient is N * mean(x).
Eigen::VectorXd haar_transform_2d(const Eigen::MatrixXd& x);
Eigen::MatrixXd haar_inverse_2d(const Eigen::VectorXd& c, Index side);

/// Explicit bases built by sampling the Haar functions on the grid and
/// normalising; columns follow the coefficient order above, so the transform
/// equals O^T x. Meant for validation, O(N^2) memory in 1D and O(N^4) in 2D.
Eigen::MatrixXd haar_basis_1d(Index side);
Eigen::MatrixXd haar_basis_2d(Index side);

/// Componentwise sgn(y) max(|y| - tau, 0).
template <typename Derived>
typename Derived::PlainObject soft_threshold(const Eigen::MatrixBase<Derived>& y, double tau) {
  return y.unaryExpr([tau](double v) {
    const double a = std::abs(v) - tau;
    return a > 0 ? (v > 0 ? a : -a) : 0.0;
  });
}

/// Transform, soft threshold every coefficient at sigma sqrt(2 log(N^2)), invert.
Eigen::MatrixXd haar_denoise_2d(const Eigen::MatrixXd& y, double sigma);

}  // namespace graphtv

#endif  // GRAPHTV_HAAR_HPP
