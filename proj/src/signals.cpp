// SPDX-License-Identifier: Apache-2.0

#include "graphtv/signals.hpp"

#include <cmath>
#include <functional>

#include "graphtv/errors.hpp"
#include "graphtv/random.hpp"

namespace graphtv {

const char* to_string(SignalKind kind) {
  switch (kind) {
    case SignalKind::Island: return "island";
    case SignalKind::Holder: return "holder";
    case SignalKind::Cartoon: return "cartoon";
    case SignalKind::BiIsotonic: return "bi_isotonic";
    case SignalKind::Custom: return "custom";
  }
  return "custom";
}

SignalKind signal_kind_from_string(const std::string& name) {
  for (auto k : {SignalKind::Island, SignalKind::Holder, SignalKind::Cartoon, SignalKind::BiIsotonic, SignalKind::Custom})
    if (name == to_string(k)) return k;
  if (name == "bi-isotonic" || name == "isotonic") return SignalKind::BiIsotonic;
  throw InvalidArgument("unknown signal kind '" + name + "'");
}

Eigen::VectorXd island_signal(Index n, int k, int l) {
  if (k < 0 || l < 0) throw InvalidArgument("island parameters must be nonnegative");
  if (static_cast<Index>(k) * l > n) throw InvalidArgument("island blocks do not fit: k*l > n");
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(n, 50.0);
  for (int j = 1; j <= k; ++j) theta.segment(static_cast<Index>(j - 1) * l, l).setConstant(50.0 + 10.0 * j);
  return theta;
}

Eigen::VectorXd sample_grid_function(const std::string& shape, int d, Index side, double alpha, double L) {
  if (d < 1 || side < 1) throw InvalidArgument("grid dimension and side must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  if (!(L > 0.0)) throw InvalidArgument("L must be positive");
  Index n = 1;
  for (int r = 0; r < d; ++r) n *= side;

  std::function<double(const Eigen::VectorXd&)> f;
  if (shape == "constant") {
    f = [L](const Eigen::VectorXd&) { return L; };
  } else if (shape == "holder_cone") {
    f = [=](const Eigen::VectorXd& x) { return L * std::pow((x.array() - 0.5).abs().maxCoeff(), alpha); };
  } else if (shape == "cartoon_disk") {
    f = [=](const Eigen::VectorXd& x) {
      const double inside = (x.array() - 0.5).matrix().norm() <= 0.3 ? 1.0 : 0.0;
      return inside + 0.5 * L * std::pow(x(0), alpha);
    };
  } else if (shape == "pc_disk") {
    f = [L](const Eigen::VectorXd& x) { return (x.array() - 0.5).matrix().norm() <= 0.3 ? L : 0.0; };
  } else if (shape == "pc_halfplane") {
    f = [L](const Eigen::VectorXd& x) { return x(0) <= 0.5 ? L : 0.0; };
  } else {
    throw InvalidArgument("unknown grid shape '" + shape + "'");
  }

  Eigen::VectorXd theta(n);
  Eigen::VectorXd x(d);
  const double N = static_cast<double>(side);
  for (Index v = 0; v < n; ++v) {
    Index rest = v;
    for (int r = 0; r < d; ++r) {
      x(r) = static_cast<double>(rest % side + 1) / N;
      rest /= side;
    }
    theta(v) = f(x);
  }
  return theta;
}

Eigen::MatrixXd bi_isotonic_signal(Index side, double variation_sqrt, std::uint64_t seed) {
  if (side < 1) throw InvalidArgument("side must be positive");
  if (!(variation_sqrt >= 0.0)) throw InvalidArgument("variation must be nonnegative");
  Rng rng(seed);
  Eigen::MatrixXd theta(side, side);
  for (Index i2 = 0; i2 < side; ++i2)
    for (Index i1 = 0; i1 < side; ++i1) theta(i1, i2) = rng.uniform();
  for (Index i2 = 0; i2 < side; ++i2)
    for (Index i1 = 1; i1 < side; ++i1) theta(i1, i2) += theta(i1 - 1, i2);
  for (Index i2 = 1; i2 < side; ++i2) theta.col(i2) += theta.col(i2 - 1);
  const double lo = theta(0, 0);
  const double range = theta(side - 1, side - 1) - lo;
  if (range <= 0.0 || variation_sqrt == 0.0) return Eigen::MatrixXd::Zero(side, side);
  return (theta.array() - lo) * (variation_sqrt / range);
}

Eigen::VectorXd gaussian_noise(Index n, const NoiseModel& model) {
  if (!(model.sigma >= 0.0)) throw InvalidArgument("sigma must be nonnegative");
  Eigen::VectorXd eps(n);
  if (model.sigma == 0.0) return eps.setZero();
  Rng rng(model.seed, model.stream_id);
  for (Index i = 0; i < n; ++i) eps(i) = model.sigma * rng.normal();
  return eps;
}

Eigen::VectorXd make_signal(const SignalSpec& spec, Index n) {
  auto grid_side = [&]() {
    Index side = spec.side;
    if (side == 0) side = static_cast<Index>(std::llround(std::pow(static_cast<double>(n), 1.0 / spec.dim)));
    Index total = 1;
    for (int r = 0; r < spec.dim; ++r) total *= side;
    if (total != n) throw InvalidArgument("grid signal does not match the graph size");
    return side;
  };
  switch (spec.kind) {
    case SignalKind::Island: return island_signal(n, spec.k, spec.l);
    case SignalKind::Holder:
    case SignalKind::Cartoon: return sample_grid_function(spec.shape, spec.dim, grid_side(), spec.alpha, spec.L);
    case SignalKind::BiIsotonic: {
      if (spec.dim != 2) throw InvalidArgument("bi-isotonic signals are two-dimensional");
      const Index side = grid_side();
      Eigen::MatrixXd theta = bi_isotonic_signal(side, spec.variation_sqrt, spec.seed);
      return Eigen::Map<const Eigen::VectorXd>(theta.data(), n);
    }
    case SignalKind::Custom:
      if (static_cast<Index>(spec.values.size()) != n) throw InvalidArgument("custom signal length mismatch");
      return Eigen::Map<const Eigen::VectorXd>(spec.values.data(), n);
  }
  throw InvalidArgument("unknown signal kind");
}

}  // namespace graphtv
