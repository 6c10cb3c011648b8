#pragma once

#include <cstdint>
#include <random>

#include "gfsplit/normal.hpp"

namespace gfsplit {

// Deterministic random helper used by seeded tests and probe generation.
// Transforms are implemented in-repo so streams are identical across
// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() {
    // 53 random bits in (0, 1); never returns 0.
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() { return normal_quantile(uniform01()); }

  std::uint64_t integer(std::uint64_t n) { return eng_() % n; }  // n small, bias negligible

 private:
  std::mt19937_64 eng_;
};

}  // namespace gfsplit
