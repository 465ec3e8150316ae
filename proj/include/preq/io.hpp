#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "preq/flow.hpp"
#include "preq/lift.hpp"

namespace preq {

/// 17 significant digits; round-trips any double exactly.
std::string format_double(double v);

/// Header t,q1..qn,p1..pn,H; one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Header t,q1..qn,p1..pn,theta,phase_re,phase_im,H.
void write_lifted_csv(std::ostream& os, const LiftedTrajectory& traj);

/// Same tables as {"header": [...], "rows": [[...], ...]}.
void write_trajectory_json(std::ostream& os, const Trajectory& traj);
void write_lifted_json(std::ostream& os, const LiftedTrajectory& traj);

struct CheckResult {
  std::string name;
  double tolerance = 0.0;
  double measured = 0.0;
  bool pass = false;
};

/// {"checks": [...], "seed": N, "scenario": name}
void write_report_json(std::ostream& os, const std::vector<CheckResult>& checks,
                       std::uint64_t seed, const std::string& scenario);

}  // namespace preq
