#include "preq/flow.hpp"

#include <cmath>

namespace preq {

namespace {

void validate_split(const Observable& H, const SeparableSplit& split) {
  if (split.kinetic.dimension() != H.dimension() ||
      split.potential.dimension() != H.dimension())
    throw DimMismatch("separable split dimension differs from H");
  if (contains_variable_kind(split.kinetic.root(), VarKind::q))
    throw NonSeparable("kinetic part T references position variables");
  if (contains_variable_kind(split.potential.root(), VarKind::p))
    throw NonSeparable("potential part V references momentum variables");
}

std::vector<Observable> gradient(const Observable& f, VarKind var) {
  std::vector<Observable> g;
  g.reserve(f.dimension());
  for (int i = 1; i <= f.dimension(); ++i)
    g.push_back(differentiate(f, var, i));
  return g;
}

}  // namespace

HamiltonianSystem::HamiltonianSystem(Observable H)
    : field_(hamiltonian_vector_field(H)) {}

HamiltonianSystem::HamiltonianSystem(Observable H, SeparableSplit split)
    : field_(hamiltonian_vector_field(H)) {
  validate_split(field_.generator, split);
  dT_dp_ = gradient(split.kinetic, VarKind::p);
  dV_dq_ = gradient(split.potential, VarKind::q);
}

const std::vector<Observable>& HamiltonianSystem::kinetic_gradient() const {
  if (!dT_dp_)
    throw NonSeparable("stormer_verlet requires a declared split H = T(p) + V(q)");
  return *dT_dp_;
}

const std::vector<Observable>& HamiltonianSystem::potential_gradient() const {
  if (!dV_dq_)
    throw NonSeparable("stormer_verlet requires a declared split H = T(p) + V(q)");
  return *dV_dq_;
}

namespace {

PhasePoint axpy(const PhasePoint& z, double a, const TangentVector& v) {
  PhasePoint out = z;
  for (std::size_t i = 0; i < out.q.size(); ++i) {
    out.q[i] += a * v.dq[i];
    out.p[i] += a * v.dp[i];
  }
  return out;
}

PhasePoint step_rk4(const HamiltonianSystem& sys, const PhasePoint& z,
                    double dt) {
  const HamiltonianField& F = sys.field();
  const TangentVector k1 = evaluate_field(F, z);
  const TangentVector k2 = evaluate_field(F, axpy(z, dt / 2, k1));
  const TangentVector k3 = evaluate_field(F, axpy(z, dt / 2, k2));
  const TangentVector k4 = evaluate_field(F, axpy(z, dt, k3));
  PhasePoint out = z;
  for (std::size_t i = 0; i < out.q.size(); ++i) {
    out.q[i] += dt / 6 * (k1.dq[i] + 2 * k2.dq[i] + 2 * k3.dq[i] + k4.dq[i]);
    out.p[i] += dt / 6 * (k1.dp[i] + 2 * k2.dp[i] + 2 * k3.dp[i] + k4.dp[i]);
  }
  return out;
}

PhasePoint step_verlet(const HamiltonianSystem& sys, const PhasePoint& z,
                       double dt) {
  const std::vector<Observable>& dT = sys.kinetic_gradient();
  const std::vector<Observable>& dV = sys.potential_gradient();
  const std::size_t n = z.q.size();
  PhasePoint half = z;
  for (std::size_t i = 0; i < n; ++i) half.p[i] -= dt / 2 * dV[i](z);
  PhasePoint out = half;
  for (std::size_t i = 0; i < n; ++i) out.q[i] += dt * dT[i](half);
  for (std::size_t i = 0; i < n; ++i) out.p[i] -= dt / 2 * dV[i](out);
  return out;
}

PhasePoint midpoint_of(const PhasePoint& a, const PhasePoint& b) {
  PhasePoint m = a;
  for (std::size_t i = 0; i < m.q.size(); ++i) {
    m.q[i] = (a.q[i] + b.q[i]) / 2;
    m.p[i] = (a.p[i] + b.p[i]) / 2;
  }
  return m;
}

PhasePoint step_midpoint(const HamiltonianSystem& sys, const PhasePoint& z,
                         double dt) {
  const HamiltonianField& F = sys.field();
  PhasePoint y = z;
  for (int it = 0; it < kMidpointMaxIterations; ++it) {
    const PhasePoint y_next = axpy(z, dt, evaluate_field(F, midpoint_of(z, y)));
    double delta = 0.0;
    for (std::size_t i = 0; i < y.q.size(); ++i) {
      delta = std::max(delta, std::fabs(y_next.q[i] - y.q[i]));
      delta = std::max(delta, std::fabs(y_next.p[i] - y.p[i]));
    }
    y = y_next;
    if (delta <= kMidpointResidual) return y;
  }
  throw NoConvergence("implicit midpoint fixed point did not reach " +
                      std::to_string(kMidpointResidual) + " in " +
                      std::to_string(kMidpointMaxIterations) + " iterations");
}

}  // namespace

PhasePoint step(const HamiltonianSystem& sys, const PhasePoint& z, double dt,
                IntegratorKind kind) {
  if (z.dimension() != sys.dimension())
    throw DimMismatch("step: phase point dimension mismatch");
  switch (kind) {
    case IntegratorKind::rk4: return step_rk4(sys, z, dt);
    case IntegratorKind::stormer_verlet: return step_verlet(sys, z, dt);
    case IntegratorKind::implicit_midpoint: return step_midpoint(sys, z, dt);
  }
  throw Error("unknown integrator kind");
}

PhasePoint step(const Observable& H, const PhasePoint& z, double dt,
                IntegratorKind kind) {
  return step(HamiltonianSystem(H), z, dt, kind);
}

Trajectory integrate(const HamiltonianSystem& sys, const PhasePoint& z0,
                     double dt, long steps, IntegratorKind kind) {
  Trajectory traj{sys.hamiltonian(), dt, {}};
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  traj.samples.push_back({0.0, z0});
  PhasePoint z = z0;
  for (long k = 1; k <= steps; ++k) {
    z = step(sys, z, dt, kind);
    traj.samples.push_back({static_cast<double>(k) * dt, z});
  }
  return traj;
}

Trajectory integrate(const Observable& H, const PhasePoint& z0, double dt,
                     long steps, IntegratorKind kind) {
  return integrate(HamiltonianSystem(H), z0, dt, steps, kind);
}

double energy_drift(const Trajectory& traj) {
  if (traj.samples.empty()) return 0.0;
  const double h0 = traj.H(traj.samples.front().z);
  double drift = 0.0;
  for (const Trajectory::Sample& s : traj.samples)
    drift = std::max(drift, std::fabs(traj.H(s.z) - h0));
  return drift;
}

RealMatrix RealMatrix::identity(int d) {
  RealMatrix m(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix flow_jacobian(const HamiltonianSystem& sys, const PhasePoint& z0,
                         double T, double dt, IntegratorKind kind,
                         ExecMode mode) {
  const int n = sys.dimension();
  const long steps = std::llround(T / dt);
  if (steps == 0) return RealMatrix::identity(2 * n);

  auto coord = [](PhasePoint& z, int j) -> double& {
    return j < z.dimension() ? z.q[j] : z.p[j - z.dimension()];
  };

  RealMatrix J(2 * n, 2 * n);
  // Column j needs two independent integrations; index = 2*j + side.
  std::vector<PhasePoint> endpoints(std::size_t(4) * n);
  parallel_for(
      std::size_t(4) * n,
      [&](std::size_t idx) {
        const int j = static_cast<int>(idx / 2);
        const double side = (idx % 2 == 0) ? 1.0 : -1.0;
        PhasePoint z = z0;
        double& zj = coord(z, j);
        const double eps = 1e-6 * std::max(1.0, std::fabs(zj));
        zj += side * eps;
        endpoints[idx] = integrate(sys, z, dt, steps, kind).samples.back().z;
      },
      mode);
  for (int j = 0; j < 2 * n; ++j) {
    PhasePoint probe = z0;
    const double eps = 1e-6 * std::max(1.0, std::fabs(coord(probe, j)));
    const PhasePoint& plus = endpoints[std::size_t(2) * j];
    const PhasePoint& minus = endpoints[std::size_t(2) * j + 1];
    for (int i = 0; i < 2 * n; ++i) {
      const double wp = i < n ? plus.q[i] : plus.p[i - n];
      const double wm = i < n ? minus.q[i] : minus.p[i - n];
      J(i, j) = (wp - wm) / (2 * eps);
    }
  }
  return J;
}

double symplecticity_defect(const RealMatrix& J) {
  if (J.rows != J.cols || J.rows % 2 != 0)
    throw DimMismatch("symplecticity_defect needs a square 2n x 2n matrix");
  const int d = J.rows;
  const int n = d / 2;
  RealMatrix omega(d, d);
  for (int i = 0; i < n; ++i) {
    omega(i, n + i) = -1.0;
    omega(n + i, i) = 1.0;
  }
  // M = J^T Omega J
  RealMatrix OJ(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += omega(i, k) * J(k, j);
      OJ(i, j) = s;
    }
  double defect = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += J(k, i) * OJ(k, j);
      defect = std::max(defect, std::fabs(s - omega(i, j)));
    }
  return defect;
}

double observable_evolution_defect(const Observable& f,
                                   const Trajectory& traj) {
  if (traj.samples.size() < 3) return 0.0;
  const Observable rate = poisson_bracket(traj.H, f);
  double defect = 0.0;
  for (std::size_t k = 1; k + 1 < traj.samples.size(); ++k) {
    const double fd = (f(traj.samples[k + 1].z) - f(traj.samples[k - 1].z)) /
                      (2 * traj.dt);
    defect = std::max(defect, std::fabs(fd - rate(traj.samples[k].z)));
  }
  return defect;
}

}  // namespace preq
