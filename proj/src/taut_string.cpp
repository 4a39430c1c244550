// SPDX-License-Identifier: Apache-2.0

#include "graphtv/tvsolver.hpp"

#include "graphtv/errors.hpp"

namespace graphtv {

namespace {

// Condat's direct algorithm for  min 1/2 ||x - y||^2 + mu sum |x_{i+1} - x_i|.
void condat(const double* input, double* output, Index width, double mu) {
  if (width <= 0) return;
  if (width == 1 || mu <= 0) {
    for (Index i = 0; i < width; ++i) output[i] = input[i];
    return;
  }
  Index k = 0, k0 = 0, kplus = 0, kminus = 0;
  double umin = mu, umax = -mu;
  double vmin = input[0] - mu, vmax = input[0] + mu;
  const double twomu = 2.0 * mu, minmu = -mu;
  for (;;) {
    while (k == width - 1) {
      if (umin < 0.0) {
        do output[k0++] = vmin; while (k0 <= kminus);
        umax = (vmin = input[kminus = k = k0]) + (umin = mu) - vmax;
      } else if (umax > 0.0) {
        do output[k0++] = vmax; while (k0 <= kplus);
        umin = (vmax = input[kplus = k = k0]) + (umax = minmu) - vmin;
      } else {
        vmin += umin / static_cast<double>(k - k0 + 1);
        do output[k0++] = vmin; while (k0 <= k);
        return;
      }
    }
    if ((umin += input[k + 1] - vmin) < minmu) {
      do output[k0++] = vmin; while (k0 <= kminus);
      vmax = (vmin = input[kplus = kminus = k = k0]) + twomu;
      umin = mu;
      umax = minmu;
    } else if ((umax += input[k + 1] - vmax) > mu) {
      do output[k0++] = vmax; while (k0 <= kplus);
      vmin = (vmax = input[kplus = kminus = k = k0]) - twomu;
      umin = mu;
      umax = minmu;
    } else {
      ++k;
      if (umin >= mu) {
        vmin += (umin - mu) / static_cast<double>((kminus = k) - k0 + 1);
        umin = mu;
      }
      if (umax <= minmu) {
        vmax += (umax + mu) / static_cast<double>((kplus = k) - k0 + 1);
        umax = minmu;
      }
    }
  }
}

}  // namespace

Eigen::VectorXd denoise_path_exact(const Eigen::VectorXd& y, double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
  Eigen::VectorXd out(y.size());
  condat(y.data(), out.data(), y.size(), lambda * static_cast<double>(y.size()) / 2.0);
  return out;
}

}  // namespace graphtv
