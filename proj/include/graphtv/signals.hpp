// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_SIGNALS_HPP
#define GRAPHTV_SIGNALS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphtv/graph.hpp"

namespace graphtv {

enum class SignalKind { Island, Holder, Cartoon, BiIsotonic, Custom };

const char* to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);

/// Ground truth description. Grid signals (Holder, Cartoon, BiIsotonic) live
/// on the side^dim grid; `side == 0` means "take it from the experiment".
struct SignalSpec {
  SignalKind kind = SignalKind::Island;
  int k = 0;  // Island: number of blocks
  int l = 0;  // Island: block size
  double alpha = 1.0;
  double L = 1.0;
  std::string shape = "holder_cone";  // Holder / Cartoon shape id
  double variation_sqrt = 1.0;        // BiIsotonic: theta_{N,N} - theta_{1,1}
  std::uint64_t seed = 0;             // BiIsotonic increments
  int dim = 2;
  Index side = 0;
  std::vector<double> values;  // Custom
};

struct NoiseModel {
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// k blocks of size l with values 50 + 10 j (j = 1..k) in the leading
/// coordinates, background 50.
Eigen::VectorXd island_signal(Index n, int k, int l);

/// Registered closed-form shapes evaluated at x = (i_1/N, ..., i_d/N),
/// i_r = 1..N, stored column major:
///   constant       f = L
///   holder_cone    f = L ||x - 1/2||_inf^alpha
///   cartoon_disk   f = 1(||x - 1/2||_2 <= 0.3) + (L/2) x_1^alpha
///   pc_disk        f = L 1(||x - 1/2||_2 <= 0.3)
///   pc_halfplane   f = L 1(x_1 <= 1/2)
Eigen::VectorXd sample_grid_function(const std::string& shape, int d, Index side, double alpha = 1.0,
                                     double L = 1.0);

/// Two-dimensional cumulative sum of nonnegative random increments, shifted
/// and scaled so theta(0,0) = 0 and theta(N-1,N-1) = variation_sqrt.
Eigen::MatrixXd bi_isotonic_signal(Index side, double variation_sqrt, std::uint64_t seed);

Eigen::VectorXd gaussian_noise(Index n, const NoiseModel& model);

/// Materialises a spec for a graph with n vertices (grid kinds need
/// side^dim == n).
Eigen::VectorXd make_signal(const SignalSpec& spec, Index n);

}  // namespace graphtv

#endif  // GRAPHTV_SIGNALS_HPP
