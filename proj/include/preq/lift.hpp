#pragma once

#include <complex>
#include <vector>

#include "preq/flow.hpp"

namespace preq {

/// A point of the trivial circle bundle L = R^2n x U(1). theta is stored
/// unwrapped (the accumulated real value, not mod 2pi); the circle
/// representative is exp(i theta).
struct LiftedPoint {
  PhasePoint base;
  double theta = 0.0;

  double theta_mod_2pi() const;
  std::complex<double> phase() const;
};

/// Lifted tangent vector (dq, dp, dtheta).
struct LiftedTangent {
  TangentVector base;
  double dtheta = 0.0;
};

/// The lift V_f = (df/dp, -df/dq, f - p . df/dp) of the Hamiltonian field of
/// f. For a Hamiltonian generator the fiber rate is the negative Lagrangian.
struct LiftedField {
  HamiltonianField base;
  Observable theta_rate;  // f - sum_i p_i df/dp_i
};

/// The Lagrangian p . dH/dp - H.
Observable lagrangian(const Observable& H);

LiftedField lift_field(const Observable& f);

/// Drops the fiber component; symbolically identical to the Hamiltonian
/// field of the generator.
const HamiltonianField& project(const LiftedField& V);

/// The connection alpha = p . dr + dtheta in the global trivialization.
/// potential_dq(i) is the dq_i coefficient p_i of the symplectic potential;
/// the dp coefficients are zero.
struct ConnectionForm {
  int n = 1;

  Observable potential_dq(int index) const;
  Observable potential_dp(int index) const;
};

/// alpha(V) at z: p(z) . dq + dtheta.
double connection_pairing(const LiftedTangent& v, const LiftedPoint& z);

/// A 1-form sum_i (cq_i dq_i + cp_i dp_i) on the base, with symbolic
/// coefficients.
struct OneForm {
  int n = 0;
  std::vector<Observable> cq;
  std::vector<Observable> cp;
};

OneForm symplectic_potential(int n);  // p . dr

/// Antisymmetrized coefficients of the exterior derivative in the ordering
/// x = (q_1..q_n, p_1..p_n): entry (a, b) is the dx_a ^ dx_b coefficient
/// d(c_b)/dx_a - d(c_a)/dx_b for a < b (lower triangle is the negation).
std::vector<std::vector<Observable>> exterior_derivative(const OneForm& form);

/// Same layout for omega0 = sum_i dp_i ^ dq_i: entry (q_i, p_i) = -1.
RealMatrix omega0_coefficients(int n);

struct LiftedTrajectory {
  struct Sample {
    double t;
    PhasePoint z;
    double theta;
  };
  Observable H;
  double dt = 0.0;
  std::vector<Sample> samples;
};

/// Integrates the lifted flow of V_H: base via the named scheme, theta as a
/// coupled component (rk4/midpoint) or by midpoint-rule quadrature of the
/// fiber rate at the half step (verlet).
LiftedTrajectory integrate_lifted(const HamiltonianSystem& sys,
                                  const LiftedPoint& z0, double dt, long steps,
                                  IntegratorKind kind);
LiftedTrajectory integrate_lifted(const Observable& H, const LiftedPoint& z0,
                                  double dt, long steps, IntegratorKind kind);

struct HolonomyResult {
  std::complex<double> phase;  // exp(i theta_final)
  double delta_theta;          // theta_final - theta_0
};

HolonomyResult holonomy_phase(const LiftedTrajectory& traj);

}  // namespace preq
