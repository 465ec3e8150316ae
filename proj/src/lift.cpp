#include "preq/lift.hpp"

#include <cmath>
#include <numbers>

namespace preq {

double LiftedPoint::theta_mod_2pi() const {
  const double two_pi = 2 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0) r += two_pi;
  return r;
}

std::complex<double> LiftedPoint::phase() const {
  return {std::cos(theta), std::sin(theta)};
}

namespace {

// f - sum_i p_i df/dp_i
ExprPtr fiber_rate_root(const Observable& f) {
  ExprPtr acc = expr_constant(0.0);
  for (int i = 1; i <= f.dimension(); ++i)
    acc = fold_add(acc, fold_mul(expr_variable(VarKind::p, i),
                                 differentiate(f, VarKind::p, i).root()));
  return fold_sub(simplify(f).root(), acc);
}

}  // namespace

Observable lagrangian(const Observable& H) {
  // p . dH/dp - H = -(fiber rate)
  return Observable(H.dimension(), fold_negate(fiber_rate_root(H)));
}

LiftedField lift_field(const Observable& f) {
  return {hamiltonian_vector_field(f),
          Observable(f.dimension(), fiber_rate_root(f))};
}

const HamiltonianField& project(const LiftedField& V) { return V.base; }

Observable ConnectionForm::potential_dq(int index) const {
  if (index < 1 || index > n)
    throw DimMismatch("connection coefficient index out of range");
  return Observable(n, expr_variable(VarKind::p, index));
}

Observable ConnectionForm::potential_dp(int index) const {
  if (index < 1 || index > n)
    throw DimMismatch("connection coefficient index out of range");
  return Observable(n, expr_constant(0.0));
}

double connection_pairing(const LiftedTangent& v, const LiftedPoint& z) {
  if (v.base.dimension() != z.base.dimension())
    throw DimMismatch("connection_pairing: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < z.base.dimension(); ++i) s += z.base.p[i] * v.base.dq[i];
  return s + v.dtheta;
}

OneForm symplectic_potential(int n) {
  OneForm form;
  form.n = n;
  for (int i = 1; i <= n; ++i) {
    form.cq.push_back(Observable(n, expr_variable(VarKind::p, i)));
    form.cp.push_back(Observable(n, expr_constant(0.0)));
  }
  return form;
}

std::vector<std::vector<Observable>> exterior_derivative(const OneForm& form) {
  const int n = form.n;
  const int d = 2 * n;
  auto coeff = [&](int a) -> const Observable& {
    return a < n ? form.cq[a] : form.cp[a - n];
  };
  auto partial = [&](const Observable& f, int a) {
    return a < n ? differentiate(f, VarKind::q, a + 1)
                 : differentiate(f, VarKind::p, a - n + 1);
  };
  std::vector<std::vector<Observable>> out;
  out.reserve(d);
  for (int a = 0; a < d; ++a) {
    std::vector<Observable> row;
    row.reserve(d);
    for (int b = 0; b < d; ++b)
      row.push_back(Observable(
          n, fold_sub(partial(coeff(b), a).root(), partial(coeff(a), b).root())));
    out.push_back(std::move(row));
  }
  return out;
}

RealMatrix omega0_coefficients(int n) {
  RealMatrix m(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    m(i, n + i) = -1.0;  // dq_i ^ dp_i coefficient of sum dp ^ dq
    m(n + i, i) = 1.0;
  }
  return m;
}

namespace {

struct LiftedState {
  PhasePoint z;
  double theta;
};

// rk4 on the coupled (q, p, theta) system; the fiber rate does not depend on
// theta, so the stages only need base evaluations.
LiftedState step_rk4_lifted(const HamiltonianSystem& sys, const Observable& rate,
                            const LiftedState& s, double dt) {
  const HamiltonianField& F = sys.field();
  auto shifted = [&](double a, const TangentVector& k) {
    PhasePoint z = s.z;
    for (std::size_t i = 0; i < z.q.size(); ++i) {
      z.q[i] += a * k.dq[i];
      z.p[i] += a * k.dp[i];
    }
    return z;
  };
  const TangentVector k1 = evaluate_field(F, s.z);
  const double r1 = rate(s.z);
  const PhasePoint z2 = shifted(dt / 2, k1);
  const TangentVector k2 = evaluate_field(F, z2);
  const double r2 = rate(z2);
  const PhasePoint z3 = shifted(dt / 2, k2);
  const TangentVector k3 = evaluate_field(F, z3);
  const double r3 = rate(z3);
  const PhasePoint z4 = shifted(dt, k3);
  const TangentVector k4 = evaluate_field(F, z4);
  const double r4 = rate(z4);
  LiftedState out = s;
  for (std::size_t i = 0; i < out.z.q.size(); ++i) {
    out.z.q[i] += dt / 6 * (k1.dq[i] + 2 * k2.dq[i] + 2 * k3.dq[i] + k4.dq[i]);
    out.z.p[i] += dt / 6 * (k1.dp[i] + 2 * k2.dp[i] + 2 * k3.dp[i] + k4.dp[i]);
  }
  out.theta += dt / 6 * (r1 + 2 * r2 + 2 * r3 + r4);
  return out;
}

LiftedState step_midpoint_lifted(const HamiltonianSystem& sys,
                                 const Observable& rate, const LiftedState& s,
                                 double dt) {
  const PhasePoint z_next = step(sys, s.z, dt, IntegratorKind::implicit_midpoint);
  PhasePoint mid = s.z;
  for (std::size_t i = 0; i < mid.q.size(); ++i) {
    mid.q[i] = (s.z.q[i] + z_next.q[i]) / 2;
    mid.p[i] = (s.z.p[i] + z_next.p[i]) / 2;
  }
  return {z_next, s.theta + dt * rate(mid)};
}

// Verlet base step plus midpoint-rule quadrature of the fiber rate at
// (q_mid, p_half).
LiftedState step_verlet_lifted(const HamiltonianSystem& sys,
                               const Observable& rate, const LiftedState& s,
                               double dt) {
  const std::vector<Observable>& dT = sys.kinetic_gradient();
  const std::vector<Observable>& dV = sys.potential_gradient();
  const std::size_t n = s.z.q.size();
  PhasePoint half = s.z;
  for (std::size_t i = 0; i < n; ++i) half.p[i] -= dt / 2 * dV[i](s.z);
  PhasePoint out = half;
  for (std::size_t i = 0; i < n; ++i) out.q[i] += dt * dT[i](half);
  PhasePoint eval_point = half;  // (q_mid, p_half)
  for (std::size_t i = 0; i < n; ++i)
    eval_point.q[i] = (s.z.q[i] + out.q[i]) / 2;
  for (std::size_t i = 0; i < n; ++i) out.p[i] -= dt / 2 * dV[i](out);
  return {out, s.theta + dt * rate(eval_point)};
}

}  // namespace

LiftedTrajectory integrate_lifted(const HamiltonianSystem& sys,
                                  const LiftedPoint& z0, double dt, long steps,
                                  IntegratorKind kind) {
  if (z0.base.dimension() != sys.dimension())
    throw DimMismatch("integrate_lifted: dimension mismatch");
  const Observable rate = lift_field(sys.hamiltonian()).theta_rate;
  LiftedTrajectory traj{sys.hamiltonian(), dt, {}};
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  LiftedState s{z0.base, z0.theta};
  traj.samples.push_back({0.0, s.z, s.theta});
  for (long k = 1; k <= steps; ++k) {
    switch (kind) {
      case IntegratorKind::rk4:
        s = step_rk4_lifted(sys, rate, s, dt);
        break;
      case IntegratorKind::stormer_verlet:
        s = step_verlet_lifted(sys, rate, s, dt);
        break;
      case IntegratorKind::implicit_midpoint:
        s = step_midpoint_lifted(sys, rate, s, dt);
        break;
    }
    traj.samples.push_back({static_cast<double>(k) * dt, s.z, s.theta});
  }
  return traj;
}

LiftedTrajectory integrate_lifted(const Observable& H, const LiftedPoint& z0,
                                  double dt, long steps, IntegratorKind kind) {
  return integrate_lifted(HamiltonianSystem(H), z0, dt, steps, kind);
}

HolonomyResult holonomy_phase(const LiftedTrajectory& traj) {
  if (traj.samples.empty()) throw Error("holonomy_phase: empty trajectory");
  const double theta0 = traj.samples.front().theta;
  const double theta1 = traj.samples.back().theta;
  return {{std::cos(theta1), std::sin(theta1)}, theta1 - theta0};
}

}  // namespace preq
