#include "preq/io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace preq {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> base_header(int n) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= n; ++i) h.push_back("q" + std::to_string(i));
  for (int i = 1; i <= n; ++i) h.push_back("p" + std::to_string(i));
  return h;
}

void write_csv_row(std::ostream& os, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << format_double(row[i]);
  }
  os << '\n';
}

std::vector<double> trajectory_row(const Trajectory& traj,
                                   const Trajectory::Sample& s) {
  std::vector<double> row{s.t};
  row.insert(row.end(), s.z.q.begin(), s.z.q.end());
  row.insert(row.end(), s.z.p.begin(), s.z.p.end());
  row.push_back(traj.H(s.z));
  return row;
}

std::vector<double> lifted_row(const LiftedTrajectory& traj,
                               const LiftedTrajectory::Sample& s) {
  std::vector<double> row{s.t};
  row.insert(row.end(), s.z.q.begin(), s.z.q.end());
  row.insert(row.end(), s.z.p.begin(), s.z.p.end());
  row.push_back(s.theta);
  row.push_back(std::cos(s.theta));
  row.push_back(std::sin(s.theta));
  row.push_back(traj.H(s.z));
  return row;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  std::vector<std::string> header = base_header(traj.H.dimension());
  header.push_back("H");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const Trajectory::Sample& s : traj.samples)
    write_csv_row(os, trajectory_row(traj, s));
}

void write_lifted_csv(std::ostream& os, const LiftedTrajectory& traj) {
  std::vector<std::string> header = base_header(traj.H.dimension());
  header.insert(header.end(), {"theta", "phase_re", "phase_im", "H"});
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << ',';
    os << header[i];
  }
  os << '\n';
  for (const LiftedTrajectory::Sample& s : traj.samples)
    write_csv_row(os, lifted_row(traj, s));
}

namespace {

void write_table_json(std::ostream& os, std::vector<std::string> header,
                      std::vector<std::vector<double>> rows) {
  json out;
  out["header"] = std::move(header);
  json jrows = json::array();
  for (std::vector<double>& r : rows) jrows.push_back(std::move(r));
  out["rows"] = std::move(jrows);
  os << out.dump(2) << '\n';
}

}  // namespace

void write_trajectory_json(std::ostream& os, const Trajectory& traj) {
  std::vector<std::string> header = base_header(traj.H.dimension());
  header.push_back("H");
  std::vector<std::vector<double>> rows;
  rows.reserve(traj.samples.size());
  for (const Trajectory::Sample& s : traj.samples)
    rows.push_back(trajectory_row(traj, s));
  write_table_json(os, std::move(header), std::move(rows));
}

void write_lifted_json(std::ostream& os, const LiftedTrajectory& traj) {
  std::vector<std::string> header = base_header(traj.H.dimension());
  header.insert(header.end(), {"theta", "phase_re", "phase_im", "H"});
  std::vector<std::vector<double>> rows;
  rows.reserve(traj.samples.size());
  for (const LiftedTrajectory::Sample& s : traj.samples)
    rows.push_back(lifted_row(traj, s));
  write_table_json(os, std::move(header), std::move(rows));
}

void write_report_json(std::ostream& os, const std::vector<CheckResult>& checks,
                       std::uint64_t seed, const std::string& scenario) {
  json out;
  json jchecks = json::array();
  for (const CheckResult& c : checks) {
    json jc;
    jc["name"] = c.name;
    jc["tolerance"] = c.tolerance;
    jc["measured"] = c.measured;
    jc["pass"] = c.pass;
    jchecks.push_back(std::move(jc));
  }
  out["checks"] = std::move(jchecks);
  out["seed"] = seed;
  out["scenario"] = scenario;
  os << out.dump(2) << '\n';
}

}  // namespace preq
