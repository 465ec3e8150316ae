#pragma once

#include <cstdint>
#include <random>

#include "preq/phase_space.hpp"

namespace preq {

/// Seeded generator for the property suites. Uniform doubles are derived
/// from the raw 64-bit stream directly so the sequence is identical on every
/// platform for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double unit() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  PhasePoint point(int n, double half_width) {
    PhasePoint z;
    z.q.reserve(n);
    z.p.reserve(n);
    for (int i = 0; i < n; ++i) z.q.push_back(uniform(-half_width, half_width));
    for (int i = 0; i < n; ++i) z.p.push_back(uniform(-half_width, half_width));
    return z;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace preq
