#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "preq/flow.hpp"
#include "test_util.hpp"

using namespace preq;
using testutil::pt1;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

HamiltonianSystem oscillator() {
  return HamiltonianSystem(parse_observable("(p1^2 + q1^2)/2", 1),
                           SeparableSplit{parse_observable("p1^2/2", 1),
                                          parse_observable("q1^2/2", 1)});
}

const IntegratorKind kAllKinds[] = {IntegratorKind::rk4,
                                    IntegratorKind::stormer_verlet,
                                    IntegratorKind::implicit_midpoint};

}  // namespace

TEST_CASE("constant-velocity flow is integrated exactly by every scheme") {
  const HamiltonianSystem lin(
      parse_observable("p1", 1),
      SeparableSplit{parse_observable("p1", 1), parse_observable("0", 1)});
  for (const IntegratorKind kind : kAllKinds) {
    const PhasePoint z = step(lin, pt1(0, 0), 0.1, kind);
    CHECK(std::fabs(z.q[0] - 0.1) <= 1e-15);
    CHECK(z.p[0] == 0.0);
  }
  // verlet and midpoint land on 0.1 bit-exactly here
  CHECK(step(lin, pt1(0, 0), 0.1, IntegratorKind::stormer_verlet).q[0] == 0.1);
  CHECK(step(lin, pt1(0, 0), 0.1, IntegratorKind::implicit_midpoint).q[0] == 0.1);
}

TEST_CASE("zero steps yields the bare initial sample") {
  const Trajectory traj =
      integrate(oscillator(), pt1(1, 0), 0.1, 0, IntegratorKind::rk4);
  REQUIRE(traj.samples.size() == 1);
  CHECK(traj.samples[0].t == 0.0);
  CHECK(traj.samples[0].z.q[0] == 1.0);
}

TEST_CASE("sample times are k * dt exactly") {
  const Trajectory traj =
      integrate(oscillator(), pt1(1, 0), 1e-3, 100, IntegratorKind::rk4);
  REQUIRE(traj.samples.size() == 101);
  for (std::size_t k = 0; k < traj.samples.size(); ++k)
    CHECK(traj.samples[k].t == static_cast<double>(k) * 1e-3);
}

TEST_CASE("oscillator follows the closed-form orbit") {
  const long steps = 10000;
  const double dt = kTwoPi / static_cast<double>(steps);
  const Trajectory traj = integrate(oscillator(), pt1(1, 0), dt, steps,
                                    IntegratorKind::implicit_midpoint);
  // endpoint returns to the start after one period
  const PhasePoint& zf = traj.samples.back().z;
  CHECK(std::hypot(zf.q[0] - 1.0, zf.p[0]) < 1e-6);
  // and the whole trajectory tracks the closed form
  double worst = 0.0;
  for (const Trajectory::Sample& s : traj.samples) {
    const PhasePoint ref = testutil::oscillator_orbit(1.0, s.t);
    worst = std::max(worst, std::hypot(s.z.q[0] - ref.q[0], s.z.p[0] - ref.p[0]));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("energy drift: exact linear flow") {
  const HamiltonianSystem lin(parse_observable("p1", 1));
  const Trajectory traj =
      integrate(lin, pt1(0, 0.5), 0.01, 1000, IntegratorKind::rk4);
  CHECK(energy_drift(traj) <= 1e-15);
}

TEST_CASE("energy drift: verlet stays bounded on the oscillator") {
  const HamiltonianSystem osc = oscillator();
  const Trajectory t4 =
      integrate(osc, pt1(1, 0), 1e-3, 10000, IntegratorKind::stormer_verlet);
  const double d4 = energy_drift(t4);
  CHECK(d4 < 1e-6);
  const Trajectory t5 =
      integrate(osc, pt1(1, 0), 1e-3, 100000, IntegratorKind::stormer_verlet);
  CHECK(energy_drift(t5) <= 2 * d4);
}

TEST_CASE("energy drift: rk4 is secular, verlet is not (coarse step)") {
  // At dt = 0.2 the rk4 amplitude decay (~(w dt)^6/72 per step) dominates
  // after 1e5 steps, while verlet keeps its bounded dt^2 oscillation.
  const HamiltonianSystem osc = oscillator();
  const double dt = 0.2;
  const long steps = 100000;
  const double rk4_drift =
      energy_drift(integrate(osc, pt1(1, 0), dt, steps, IntegratorKind::rk4));
  const double verlet_drift = energy_drift(
      integrate(osc, pt1(1, 0), dt, steps, IntegratorKind::stormer_verlet));
  CHECK(rk4_drift > verlet_drift);
  // rk4's energy loss is monotone in time: the loss at the end is the max
  const Trajectory rk4_traj =
      integrate(osc, pt1(1, 0), dt, steps, IntegratorKind::rk4);
  const double h0 = rk4_traj.H(rk4_traj.samples.front().z);
  const double h_end = rk4_traj.H(rk4_traj.samples.back().z);
  CHECK(h_end < h0);
  CHECK(std::fabs(h_end - h0) == doctest::Approx(rk4_drift).epsilon(1e-10));
}

TEST_CASE("verlet requires a declared separable split") {
  const HamiltonianSystem undeclared(parse_observable("(p1^2 + q1^2)/2", 1));
  CHECK_THROWS_AS(step(undeclared, pt1(1, 0), 0.1, IntegratorKind::stormer_verlet),
                  NonSeparable);
  CHECK_THROWS_AS(
      HamiltonianSystem(parse_observable("(p1^2 + q1^2)/2", 1),
                        SeparableSplit{parse_observable("p1^2/2 + q1", 1),
                                       parse_observable("q1^2/2", 1)}),
      NonSeparable);
  CHECK_THROWS_AS(
      HamiltonianSystem(parse_observable("(p1^2 + q1^2)/2", 1),
                        SeparableSplit{parse_observable("p1^2/2", 1),
                                       parse_observable("q1^2/2 + p1", 1)}),
      NonSeparable);
}

TEST_CASE("implicit midpoint reports no convergence on a stiff generator") {
  const HamiltonianSystem stiff(parse_observable("100000000*(p1^2 + q1^2)/2", 1));
  CHECK_THROWS_AS(step(stiff, pt1(1, 0), 1.0, IntegratorKind::implicit_midpoint),
                  NoConvergence);
}

TEST_CASE("implicit midpoint is reversible") {
  const HamiltonianSystem osc = oscillator();
  const PhasePoint fwd = step(osc, pt1(1, 0), 0.1, IntegratorKind::implicit_midpoint);
  const PhasePoint back = step(osc, fwd, -0.1, IntegratorKind::implicit_midpoint);
  CHECK(std::hypot(back.q[0] - 1.0, back.p[0]) < 1e-10);
}

TEST_CASE("flow jacobian: zero time gives the identity") {
  const RealMatrix J = flow_jacobian(oscillator(), pt1(0.3, -0.2), 0.0, 1e-3,
                                     IntegratorKind::rk4);
  CHECK(J(0, 0) == 1.0);
  CHECK(J(1, 1) == 1.0);
  CHECK(J(0, 1) == 0.0);
  CHECK(J(1, 0) == 0.0);
}

TEST_CASE("flow jacobian: oscillator monodromy is the identity") {
  const RealMatrix J = flow_jacobian(oscillator(), pt1(1, 0), kTwoPi, 1e-3,
                                     IntegratorKind::implicit_midpoint);
  const RealMatrix I = RealMatrix::identity(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::fabs(J(i, j) - I(i, j)) < 1e-5);
}

TEST_CASE("flow jacobian: free particle is a shear") {
  const HamiltonianSystem free_particle(parse_observable("p1^2/2", 1));
  const RealMatrix J = flow_jacobian(free_particle, pt1(0, 1), 1.0, 1e-3,
                                     IntegratorKind::rk4);
  CHECK(std::fabs(J(0, 0) - 1.0) < 1e-5);
  CHECK(std::fabs(J(0, 1) - 1.0) < 1e-5);
  CHECK(std::fabs(J(1, 0)) < 1e-5);
  CHECK(std::fabs(J(1, 1) - 1.0) < 1e-5);
}

TEST_CASE("symplecticity defect: reference matrices") {
  CHECK(symplecticity_defect(RealMatrix::identity(2)) == 0.0);

  RealMatrix omega(2, 2);
  omega(0, 1) = -1.0;
  omega(1, 0) = 1.0;
  CHECK(symplecticity_defect(omega) == 0.0);

  RealMatrix d(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 1.0;
  CHECK(symplecticity_defect(d) == 1.0);
}

TEST_CASE("symplecticity of the symplectic schemes, oscillator and quartic") {
  const HamiltonianSystem osc = oscillator();
  const HamiltonianSystem quart(
      parse_observable("p1^4/4 + q1^4/4", 1),
      SeparableSplit{parse_observable("p1^4/4", 1),
                     parse_observable("q1^4/4", 1)});
  for (const IntegratorKind kind :
       {IntegratorKind::stormer_verlet, IntegratorKind::implicit_midpoint}) {
    CHECK(symplecticity_defect(
              flow_jacobian(osc, pt1(1, 0), 1.0, 1e-3, kind)) < 1e-5);
    CHECK(symplecticity_defect(
              flow_jacobian(quart, pt1(1, 0.5), 1.0, 1e-3, kind)) < 1e-5);
  }
}

TEST_CASE("observable evolution defect: conserved quantities") {
  const HamiltonianSystem osc = oscillator();
  const Trajectory traj =
      integrate(osc, pt1(1, 0), 1e-3, 10000, IntegratorKind::stormer_verlet);
  // f = H: {H,H} = 0 and H is conserved to the scheme's accuracy
  CHECK(observable_evolution_defect(osc.hamiltonian(), traj) < 1e-6);

  // n = 2: angular momentum commutes with the isotropic oscillator
  const HamiltonianSystem iso(
      parse_observable("(p1^2 + p2^2)/2 + (q1^2 + q2^2)/2", 2));
  const Trajectory traj2 =
      integrate(iso, {{1.0, 0.2}, {0.0, -0.4}}, 1e-3, 2000,
                IntegratorKind::implicit_midpoint);
  const Observable L = parse_observable("q1*p2 - q2*p1", 2);
  CHECK(observable_evolution_defect(L, traj2) < 1e-6);
}

TEST_CASE("observable evolution defect: O(dt^2) decay for f = q1") {
  const HamiltonianSystem osc = oscillator();
  const Observable f = parse_observable("q1", 1);
  const double dt = 1e-3;
  const long steps = static_cast<long>(std::llround(kTwoPi / dt));
  const Trajectory coarse =
      integrate(osc, pt1(1, 0), dt, steps, IntegratorKind::implicit_midpoint);
  const Trajectory fine = integrate(osc, pt1(1, 0), dt / 2, 2 * steps,
                                    IntegratorKind::implicit_midpoint);
  const double dc = observable_evolution_defect(f, coarse);
  const double df = observable_evolution_defect(f, fine);
  CHECK(dc < 1e-4);
  const double ratio = dc / df;
  CHECK(ratio >= 3.0);
  CHECK(ratio <= 5.0);
}

TEST_CASE("integration propagates evaluation domain errors") {
  const HamiltonianSystem sys(parse_observable("ln(q1)*p1", 1));
  // the flow pushes q1 toward 0 from 1 with these signs; stepping from a
  // negative q1 fails immediately
  CHECK_THROWS_AS(step(sys, pt1(-1.0, 0.5), 0.1, IntegratorKind::rk4),
                  DomainError);
}
