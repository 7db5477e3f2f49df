#pragma once

#include <cstdint>
#include <random>

namespace darkpool {

std::uint64_t splitmix64(std::uint64_t x);

/// Derives the seed of substream `stream` from a 64-bit master seed.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);

/// Reproducible random source. The engine sequence is fixed by the standard
/// and every transform below is implemented here, so a (seed, stream) pair
/// yields the same draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Standard normal (polar Box-Muller, one spare value cached).
  double normal();
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace darkpool
