#pragma once

// Oracles shared by the unit tests: a central finite-difference derivative
// (independent of the symbolic path it checks) and closed-form reference
// flows. Kept header-only and test-local on purpose.

#include <cmath>
#include <vector>

#include "preq/expr.hpp"
#include "preq/rng.hpp"

namespace testutil {

inline preq::PhasePoint pt1(double q, double p) { return {{q}, {p}}; }

inline preq::PhasePoint pt2(double q1, double q2, double p1, double p2) {
  return {{q1, q2}, {p1, p2}};
}

inline double central_difference(const preq::Observable& f,
                                 const preq::PhasePoint& z, preq::VarKind var,
                                 int index, double h) {
  preq::PhasePoint zp = z, zm = z;
  auto& cp = var == preq::VarKind::q ? zp.q : zp.p;
  auto& cm = var == preq::VarKind::q ? zm.q : zm.p;
  cp[index - 1] += h;
  cm[index - 1] -= h;
  return (f(zp) - f(zm)) / (2 * h);
}

// Closed-form oscillator orbit for H = (p^2 + q^2)/2 from (A, 0):
// q(t) = A cos t, p(t) = -A sin t.
inline preq::PhasePoint oscillator_orbit(double amplitude, double t) {
  return pt1(amplitude * std::cos(t), -amplitude * std::sin(t));
}

inline std::vector<preq::PhasePoint> seeded_points(std::uint64_t seed, int n,
                                                   int count,
                                                   double half_width = 2.0) {
  preq::Rng rng(seed);
  std::vector<preq::PhasePoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) pts.push_back(rng.point(n, half_width));
  return pts;
}

}  // namespace testutil
