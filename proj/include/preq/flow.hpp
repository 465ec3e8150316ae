#pragma once

#include <optional>
#include <vector>

#include "preq/parallel.hpp"
#include "preq/symplectic.hpp"

namespace preq {

enum class IntegratorKind { rk4, stormer_verlet, implicit_midpoint };

/// Declared split H = T(p) + V(q). Validated on construction: T must not
/// reference q variables, V must not reference p variables.
struct SeparableSplit {
  Observable kinetic;    // T(p)
  Observable potential;  // V(q)
};

/// A Hamiltonian with its vector field precompiled, plus the split
/// derivatives when one is declared (required by stormer_verlet).
class HamiltonianSystem {
 public:
  explicit HamiltonianSystem(Observable H);
  HamiltonianSystem(Observable H, SeparableSplit split);

  int dimension() const noexcept { return field_.dimension(); }
  const Observable& hamiltonian() const noexcept { return field_.generator; }
  const HamiltonianField& field() const noexcept { return field_; }
  bool separable() const noexcept { return dT_dp_.has_value(); }

  // dT/dp_i and dV/dq_i; NonSeparable when no split was declared.
  const std::vector<Observable>& kinetic_gradient() const;
  const std::vector<Observable>& potential_gradient() const;

 private:
  HamiltonianField field_;
  std::optional<std::vector<Observable>> dT_dp_;
  std::optional<std::vector<Observable>> dV_dq_;
};

inline constexpr double kMidpointResidual = 1e-12;
inline constexpr int kMidpointMaxIterations = 50;

/// One step of the named scheme. rk4 is the classical 4th-order scheme,
/// stormer_verlet the kick-drift-kick splitting, implicit_midpoint is solved
/// by fixed-point iteration to kMidpointResidual.
PhasePoint step(const HamiltonianSystem& sys, const PhasePoint& z, double dt,
                IntegratorKind kind);
PhasePoint step(const Observable& H, const PhasePoint& z, double dt,
                IntegratorKind kind);

struct Trajectory {
  struct Sample {
    double t;
    PhasePoint z;
  };
  Observable H;
  double dt = 0.0;
  std::vector<Sample> samples;  // steps + 1 entries; samples[k].t == k * dt
};

Trajectory integrate(const HamiltonianSystem& sys, const PhasePoint& z0,
                     double dt, long steps, IntegratorKind kind);
Trajectory integrate(const Observable& H, const PhasePoint& z0, double dt,
                     long steps, IntegratorKind kind);

/// max over samples of |H(z_k) - H(z_0)|.
double energy_drift(const Trajectory& traj);

/// Small dense real matrix, row-major.
struct RealMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  RealMatrix() = default;
  RealMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const { return a[std::size_t(i) * cols + j]; }
  static RealMatrix identity(int d);
};

/// Central finite differences of the time-T flow map in (q, p) ordering;
/// perturbation 1e-6 * max(1, |z0_i|) per coordinate. steps = round(T/dt);
/// T = 0 gives the identity.
RealMatrix flow_jacobian(const HamiltonianSystem& sys, const PhasePoint& z0,
                         double T, double dt, IntegratorKind kind,
                         ExecMode mode = default_exec());

/// max-norm of J^T Omega0 J - Omega0 with Omega0 = [[0, -I], [I, 0]]
/// (entry omega0(dq_i, dp_j) = -delta_ij) in (q, p) ordering.
double symplecticity_defect(const RealMatrix& J);

/// max over interior samples of |centered dt-difference of f along the
/// trajectory - {H,f} at the sample| (omega-bracket convention).
double observable_evolution_defect(const Observable& f, const Trajectory& traj);

}  // namespace preq
