// SPDX-License-Identifier: Apache-2.0

#include "graphtv/haar.hpp"

#include <cmath>
#include <string>

#include "graphtv/errors.hpp"

namespace graphtv {

namespace {

int log2_exact(Index n, const char* what) {
  if (!is_power_of_two(n)) throw InvalidArgument(std::string(what) + " must be a power of two, got " + std::to_string(n));
  int m = 0;
  while ((Index{1} << m) < n) ++m;
  return m;
}

// Slot of detail (j, e, k1, k2) in the 2D coefficient vector.
Index slot_2d(int j, int e, Index k1, Index k2) {
  const Index per_dir = Index{1} << (2 * j);
  // 1 + sum_{j' < j} 3 * 4^{j'} = 4^j
  return per_dir + e * per_dir + k1 * (Index{1} << j) + k2;
}

double haar_mother(int e, double t) {
  if (t < 0.0 || t >= 1.0) return 0.0;
  if (e == 0) return 1.0;
  return t < 0.5 ? 1.0 : -1.0;
}

}  // namespace

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

Eigen::VectorXd haar_transform_1d(const Eigen::VectorXd& x) {
  const int levels = log2_exact(x.size(), "signal length");
  Eigen::VectorXd c = x;
  Eigen::VectorXd tmp(x.size());
  const double r = 1.0 / std::sqrt(2.0);
  for (int m = levels - 1; m >= 0; --m) {
    const Index half = Index{1} << m;
    for (Index k = 0; k < half; ++k) {
      tmp(k) = r * (c(2 * k) + c(2 * k + 1));
      tmp(half + k) = r * (c(2 * k) - c(2 * k + 1));
    }
    c.head(2 * half) = tmp.head(2 * half);
  }
  return c;
}

Eigen::VectorXd haar_inverse_1d(const Eigen::VectorXd& c) {
  const int levels = log2_exact(c.size(), "coefficient length");
  Eigen::VectorXd x = c;
  Eigen::VectorXd tmp(c.size());
  const double r = 1.0 / std::sqrt(2.0);
  for (int m = 0; m < levels; ++m) {
    const Index half = Index{1} << m;
    for (Index k = 0; k < half; ++k) {
      tmp(2 * k) = r * (x(k) + x(half + k));
      tmp(2 * k + 1) = r * (x(k) - x(half + k));
    }
    x.head(2 * half) = tmp.head(2 * half);
  }
  return x;
}

Eigen::VectorXd haar_transform_2d(const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols()) throw InvalidArgument("image must be square");
  const Index side = x.rows();
  const int levels = log2_exact(side, "image side");
  Eigen::VectorXd c(side * side);
  Eigen::MatrixXd approx = x;
  for (int j = levels - 1; j >= 0; --j) {
    const Index half = Index{1} << j;
    Eigen::MatrixXd next(half, half);
    for (Index k2 = 0; k2 < half; ++k2)
      for (Index k1 = 0; k1 < half; ++k1) {
        const double a = approx(2 * k1, 2 * k2), b = approx(2 * k1, 2 * k2 + 1);
        const double cc = approx(2 * k1 + 1, 2 * k2), d = approx(2 * k1 + 1, 2 * k2 + 1);
        next(k1, k2) = 0.5 * (a + b + cc + d);
        c(slot_2d(j, 0, k1, k2)) = 0.5 * (a - b + cc - d);
        c(slot_2d(j, 1, k1, k2)) = 0.5 * (a + b - cc - d);
        c(slot_2d(j, 2, k1, k2)) = 0.5 * (a - b - cc + d);
      }
    approx = std::move(next);
  }
  c(0) = approx(0, 0);
  return c;
}

Eigen::MatrixXd haar_inverse_2d(const Eigen::VectorXd& c, Index side) {
  const int levels = log2_exact(side, "image side");
  if (c.size() != side * side) throw InvalidArgument("coefficient vector must have N^2 entries");
  Eigen::MatrixXd approx(1, 1);
  approx(0, 0) = c(0);
  for (int j = 0; j < levels; ++j) {
    const Index half = Index{1} << j;
    Eigen::MatrixXd next(2 * half, 2 * half);
    for (Index k2 = 0; k2 < half; ++k2)
      for (Index k1 = 0; k1 < half; ++k1) {
        const double s = approx(k1, k2);
        const double p = c(slot_2d(j, 0, k1, k2));
        const double q = c(slot_2d(j, 1, k1, k2));
        const double r = c(slot_2d(j, 2, k1, k2));
        next(2 * k1, 2 * k2) = 0.5 * (s + p + q + r);
        next(2 * k1, 2 * k2 + 1) = 0.5 * (s - p + q - r);
        next(2 * k1 + 1, 2 * k2) = 0.5 * (s + p - q - r);
        next(2 * k1 + 1, 2 * k2 + 1) = 0.5 * (s - p - q + r);
      }
    approx = std::move(next);
  }
  return approx;
}

Eigen::MatrixXd haar_basis_1d(Index side) {
  const int levels = log2_exact(side, "signal length");
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(side, side);
  const double n = static_cast<double>(side);
  auto fill = [&](Index col, int m, Index k, int e) {
    const double scale = std::ldexp(1.0, m);
    for (Index i = 0; i < side; ++i) basis(i, col) = haar_mother(e, scale * (static_cast<double>(i) / n) - static_cast<double>(k));
    basis.col(col).normalize();
  };
  fill(0, 0, 0, 0);
  Index col = 1;
  for (int m = 0; m < levels; ++m)
    for (Index k = 0; k < (Index{1} << m); ++k) fill(col++, m, k, 1);
  return basis;
}

Eigen::MatrixXd haar_basis_2d(Index side) {
  const int levels = log2_exact(side, "image side");
  const Index n = side * side;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(n, n);
  const double N = static_cast<double>(side);
  static constexpr int kDirections[3][2] = {{0, 1}, {1, 0}, {1, 1}};
  auto fill = [&](Index col, int j, int e1, int e2, Index k1, Index k2) {
    const double scale = std::ldexp(1.0, j);
    for (Index i2 = 0; i2 < side; ++i2)
      for (Index i1 = 0; i1 < side; ++i1) {
        const double u = scale * (static_cast<double>(i1) / N) - static_cast<double>(k1);
        const double v = scale * (static_cast<double>(i2) / N) - static_cast<double>(k2);
        basis(i1 + side * i2, col) = scale * haar_mother(e1, u) * haar_mother(e2, v);
      }
    basis.col(col).normalize();
  };
  fill(0, 0, 0, 0, 0, 0);
  for (int j = 0; j < levels; ++j)
    for (int e = 0; e < 3; ++e)
      for (Index k1 = 0; k1 < (Index{1} << j); ++k1)
        for (Index k2 = 0; k2 < (Index{1} << j); ++k2)
          fill(slot_2d(j, e, k1, k2), j, kDirections[e][0], kDirections[e][1], k1, k2);
  return basis;
}

Eigen::MatrixXd haar_denoise_2d(const Eigen::MatrixXd& y, double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  const Index side = y.rows();
  const Eigen::VectorXd c = haar_transform_2d(y);
  if (sigma == 0.0) return y;
  const double tau = sigma * std::sqrt(2.0 * std::log(static_cast<double>(side * side)));
  return haar_inverse_2d(soft_threshold(c, tau), side);
}

}  // namespace graphtv
