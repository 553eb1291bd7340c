#pragma once

#include <cstdint>
#include <random>

namespace latentkit {

struct RngSeed {
  std::uint64_t value = 0;
};

/// Deterministic random stream: identical seed + identical call sequence
/// gives an identical stream. Each draw constructs its distribution fresh so
/// no distribution-internal cache leaks across calls.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  explicit Rng(RngSeed seed) : gen_(seed.value) {}

  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(gen_); }

  double uniform(double lo, double hi) {
    if (lo == hi) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

  /// Uniform integer in [0, bound).
  std::uint64_t integer(std::uint64_t bound) {
    return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(gen_);
  }

 private:
  std::mt19937_64 gen_;
};

/// splitmix64 round; used to derive per-stage sub-seeds from a master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace latentkit
