// SPDX-License-Identifier: Apache-2.0

#ifndef GRAPHTV_RANDOM_HPP
#define GRAPHTV_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace graphtv {

/// SplitMix64 finalizer. Used to derive independent substream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Folds a list of integers into one seed; order matters.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);

/// Bit-stable generator: std::mt19937_64 (sequence fixed by the standard)
/// with uniforms built from the top 53 bits and normals from Box-Muller.
/// Deliberately avoids std::*_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : Rng(derive_seed({seed, stream})) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  /// Uniform integer on [0, bound). bound must be positive.
  std::uint64_t uniform_int(std::uint64_t bound);

  /// Standard normal.
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace graphtv

#endif  // GRAPHTV_RANDOM_HPP
