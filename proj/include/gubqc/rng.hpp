#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gubqc {

// Seeded random source with hand-rolled draws. std::uniform_*_distribution is
// implementation-defined, so the draws here are spelled out to keep sequences
// stable across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, bound).
  uint64_t uniform_int(uint64_t bound) {
    const uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const uint64_t r = eng_();
      if (r >= threshold) return r % bound;
    }
  }

  int coin() { return static_cast<int>(eng_() >> 63); }

  // Standard normal via Box-Muller (sine half discarded).
  double gaussian() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace gubqc
