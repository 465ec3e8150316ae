// Compares the serial and OpenMP paths of the point-evaluation kernels:
// Simpson quadrature, Dirac residual batches and the FD flow Jacobian.
// Results must agree bitwise; only the timing differs.

#include <chrono>
#include <cstdio>
#include <string>

#include "preq/flow.hpp"
#include "preq/prequantum.hpp"
#include "preq/rng.hpp"

using namespace preq;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

template <class Fn>
double timed(Fn&& fn, double& result_out) {
  const double t0 = now_ms();
  result_out = fn();
  return now_ms() - t0;
}

void report(const char* name, double serial_ms, double parallel_ms,
            double serial_val, double parallel_val) {
  std::printf("%-28s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              serial_val == parallel_val ? "bitwise-equal" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", max_threads());

  const Observable g = parse_observable("exp(-(q1^2 + p1^2)/2)", 1);
  const Section s1 = make_section(parse_observable("exp(-(q1^2+p1^2)/2)*q1", 1),
                                  parse_observable("exp(-(q1^2+p1^2)/2)*p1", 1));
  const Section s2 = make_section(
      parse_observable("exp(-(q1^2+p1^2)/2)*(1+q1*p1)", 1),
      parse_observable("exp(-(q1^2+p1^2)/2)*(q1^2-p1^2)/2", 1));

  {
    const Observable f = parse_observable("q1*p1", 1);
    double rs = 0, rp = 0;
    const double ts = timed(
        [&] { return symmetry_defect(f, s1, s2, 6.0, 401, 1.0, ExecMode::serial); },
        rs);
    const double tp = timed(
        [&] { return symmetry_defect(f, s1, s2, 6.0, 401, 1.0, ExecMode::parallel); },
        rp);
    report("symmetry_defect m=401", ts, tp, rs, rp);
  }

  {
    Rng rng(1);
    std::vector<PhasePoint> pts;
    for (int i = 0; i < 20000; ++i) pts.push_back(rng.point(1, 2.0));
    const Observable f = parse_observable("q1^2*p1", 1);
    const Observable h = parse_observable("q1*p1", 1);
    double rs = 0, rp = 0;
    const double ts = timed(
        [&] { return dirac_residual(f, h, s1, pts, 1.0, ExecMode::serial); }, rs);
    const double tp = timed(
        [&] { return dirac_residual(f, h, s1, pts, 1.0, ExecMode::parallel); }, rp);
    report("dirac_residual 20k points", ts, tp, rs, rp);
  }

  {
    const HamiltonianSystem sys(
        parse_observable("(p1^2+p2^2)/2 + (q1^4+q2^4)/4 + q1*q2", 2));
    const PhasePoint z0{{0.3, -0.2}, {0.1, 0.4}};
    double rs = 0, rp = 0;
    const double ts = timed(
        [&] {
          return symplecticity_defect(flow_jacobian(
              sys, z0, 1.0, 1e-3, IntegratorKind::implicit_midpoint,
              ExecMode::serial));
        },
        rs);
    const double tp = timed(
        [&] {
          return symplecticity_defect(flow_jacobian(
              sys, z0, 1.0, 1e-3, IntegratorKind::implicit_midpoint,
              ExecMode::parallel));
        },
        rp);
    report("flow_jacobian n=2", ts, tp, rs, rp);
  }

  return 0;
}
