#pragma once

#include <vector>

namespace preq {

/// A point (q, p) of the phase space R^2n.
struct PhasePoint {
  std::vector<double> q;
  std::vector<double> p;

  int dimension() const noexcept { return static_cast<int>(q.size()); }
};

/// A tangent direction (dq, dp) at a phase point.
struct TangentVector {
  std::vector<double> dq;
  std::vector<double> dp;

  int dimension() const noexcept { return static_cast<int>(dq.size()); }
};

}  // namespace preq
