#pragma once

#include <cstdint>
#include <random>

namespace gridsec {

/// Seeded generator with platform-stable derived draws.
///
/// std::mt19937_64's raw output is fixed by the standard, but the standard
/// distributions are not; every draw here is derived from raw words so a
/// given seed yields the same sequence on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream keyed by (seed, stream).
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound); bound must be non-zero.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling over the largest multiple of bound.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform in [lo, hi] inclusive.
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0 && hi == UINT64_MAX) return engine_();
    return lo + below(hi - lo + 1);
  }

  /// Uniform double in [0, 1) with 53 bits of precision.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <class It>
  void fill(It first, It last) {
    std::uint64_t word = 0;
    int left = 0;
    for (; first != last; ++first) {
      if (left == 0) {
        word = engine_();
        left = 8;
      }
      *first = static_cast<std::uint8_t>(word);
      word >>= 8;
      --left;
    }
  }

 private:
  explicit Rng(std::seed_seq& seq) : engine_(seq) {}

  std::mt19937_64 engine_;
};

}  // namespace gridsec
