#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "preq/io.hpp"
#include "preq/lift.hpp"
#include "preq/quantum.hpp"
#include "preq/rng.hpp"
#include "preq/scenario.hpp"
#include "preq/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitChecksFailed = 4;

using preq::ConfigError;

struct OutputTarget {
  std::optional<std::string> path;

  // Streams to the file when set, stdout otherwise.
  template <class Fn>
  void write(Fn&& fn) const {
    if (path) {
      std::ofstream os(*path);
      if (!os) throw ConfigError("cannot open output file " + *path);
      fn(os);
    } else {
      fn(std::cout);
    }
  }
};

std::map<std::string, double> parse_tolerance_overrides(
    const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const std::string& item : raw) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--tol expects NAME=VALUE, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("--tol value in '" + item + "' is not a number");
    }
  }
  return out;
}

int run_simulate(const std::string& config, const OutputTarget& out,
                 const std::string& format) {
  preq::Scenario sc = preq::load_scenario(config);
  const preq::HamiltonianSystem sys = preq::compile_system(sc);
  const preq::Trajectory traj = preq::integrate(
      sys, preq::initial_point(sc), sc.dt, sc.steps, sc.integrator);
  out.write([&](std::ostream& os) {
    format == "json" ? preq::write_trajectory_json(os, traj)
                     : preq::write_trajectory_csv(os, traj);
  });
  return kExitOk;
}

int run_lift(const std::string& config, const OutputTarget& out,
             const std::string& format) {
  preq::Scenario sc = preq::load_scenario(config);
  const preq::HamiltonianSystem sys = preq::compile_system(sc);
  const preq::LiftedTrajectory traj = preq::integrate_lifted(
      sys, preq::initial_lifted_point(sc), sc.dt, sc.steps, sc.integrator);
  out.write([&](std::ostream& os) {
    format == "json" ? preq::write_lifted_json(os, traj)
                     : preq::write_lifted_csv(os, traj);
  });
  return kExitOk;
}

int run_checks(const std::string& config, const OutputTarget& out,
               const std::vector<std::string>& tol,
               std::optional<std::uint64_t> seed, bool serial, bool opcheck) {
  const preq::Scenario sc = preq::load_scenario(config);
  preq::VerifyOptions opts;
  opts.seed = seed.value_or(sc.seed);
  opts.mode = serial ? preq::ExecMode::serial : preq::default_exec();
  opts.tolerance_overrides = parse_tolerance_overrides(tol);
  const std::vector<preq::CheckResult> checks =
      opcheck ? preq::run_opcheck(opts) : preq::run_verification(opts);
  out.write([&](std::ostream& os) {
    preq::write_report_json(os, checks, opts.seed, sc.name);
  });
  return preq::all_passed(checks) ? kExitOk : kExitChecksFailed;
}

int run_quantum(const std::string& config, const OutputTarget& out) {
  const preq::QuantumSpec spec = preq::load_quantum_spec(config);
  const preq::HermitianMatrix H(spec.hamiltonian);
  preq::StateVector psi0{spec.psi0};
  if (!psi0.is_unit())
    throw ConfigError("psi0 is not a unit vector (norm " +
                      preq::format_double(psi0.norm()) + ")");

  nlohmann::ordered_json report;
  nlohmann::ordered_json states = nlohmann::ordered_json::array();
  std::vector<double> norms, tangency, distances;
  for (const double t : spec.times) {
    const preq::StateVector psi = preq::propagate(H, psi0, t, spec.hbar);
    nlohmann::ordered_json jstate = nlohmann::ordered_json::array();
    for (const preq::cplx& v : psi.a)
      jstate.push_back({v.real(), v.imag()});
    states.push_back(std::move(jstate));
    norms.push_back(psi.norm());
    tangency.push_back(preq::tangency_defect(H, psi, spec.hbar));
    distances.push_back(preq::projective_distance(psi, psi0));
  }
  report["states"] = std::move(states);
  report["norms"] = norms;
  report["tangency_defects"] = tangency;
  report["projective_distances"] = distances;
  out.write([&](std::ostream& os) { os << report.dump(2) << '\n'; });
  return kExitOk;
}

int run_brackets(const std::string& config, const std::string& f_text,
                 const std::string& g_text, const OutputTarget& out) {
  const preq::Scenario sc = preq::load_scenario(config);
  const preq::Observable f = preq::parse_observable(f_text, sc.n);
  const preq::Observable g = preq::parse_observable(g_text, sc.n);
  const preq::Observable omega = preq::poisson_bracket(f, g);
  const preq::Observable canonical = preq::canonical_poisson_bracket(f, g);
  preq::Rng rng(sc.seed);
  out.write([&](std::ostream& os) {
    os << "omega_bracket     = " << preq::to_string(omega) << '\n';
    os << "canonical_bracket = " << preq::to_string(canonical) << '\n';
    os << "sample points (seed " << sc.seed << "):\n";
    for (int k = 0; k < 5; ++k) {
      const preq::PhasePoint z = rng.point(sc.n, 2.0);
      os << "  z=(";
      for (int i = 0; i < sc.n; ++i)
        os << (i ? "," : "") << "q" << i + 1 << "=" << preq::format_double(z.q[i]);
      for (int i = 0; i < sc.n; ++i)
        os << ",p" << i + 1 << "=" << preq::format_double(z.p[i]);
      os << ")  omega=" << preq::format_double(omega(z))
         << "  canonical=" << preq::format_double(canonical(z)) << '\n';
    }
  });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Hamiltonian flows on (R^2n, omega0), U(1) prequantum lifts, "
      "Kostant-Souriau operators, and finite-dimensional Schrodinger flows"};
  app.require_subcommand(1);

  std::string config, format = "csv", f_text, g_text;
  std::vector<std::string> tol;
  std::optional<std::string> out_path;
  std::optional<std::uint64_t> seed;
  bool serial = false;

  auto add_common = [&](CLI::App* cmd, bool with_format) {
    cmd->add_option("--config", config, "scenario/spec JSON path")->required();
    cmd->add_option("--out", out_path, "output path (default: stdout)");
    if (with_format)
      cmd->add_option("--format", format, "csv or json")
          ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* simulate = app.add_subcommand("simulate", "integrate the base flow");
  add_common(simulate, true);
  CLI::App* lift = app.add_subcommand("lift", "integrate the lifted flow with phase");
  add_common(lift, true);
  CLI::App* verify = app.add_subcommand("verify", "run every invariant suite");
  add_common(verify, false);
  verify->add_option("--tol", tol, "override tolerance, NAME=VALUE");
  verify->add_option("--seed", seed, "override the scenario seed");
  verify->add_flag("--serial", serial, "force serial kernels");
  CLI::App* opcheck = app.add_subcommand("opcheck", "operator condition report");
  add_common(opcheck, false);
  opcheck->add_option("--tol", tol, "override tolerance, NAME=VALUE");
  opcheck->add_option("--seed", seed, "override the scenario seed");
  opcheck->add_flag("--serial", serial, "force serial kernels");
  CLI::App* quantum = app.add_subcommand("quantum", "finite-dimensional Schrodinger flow");
  add_common(quantum, false);
  CLI::App* brackets = app.add_subcommand("brackets", "print both bracket conventions");
  add_common(brackets, false);
  brackets->add_option("--f", f_text, "first observable")->required();
  brackets->add_option("--g", g_text, "second observable")->required();

  CLI11_PARSE(app, argc, argv);
  const OutputTarget out{out_path};

  try {
    if (simulate->parsed()) return run_simulate(config, out, format);
    if (lift->parsed()) return run_lift(config, out, format);
    if (verify->parsed())
      return run_checks(config, out, tol, seed, serial, false);
    if (opcheck->parsed())
      return run_checks(config, out, tol, seed, serial, true);
    if (quantum->parsed()) return run_quantum(config, out);
    if (brackets->parsed()) return run_brackets(config, f_text, g_text, out);
  } catch (const preq::DomainError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const preq::NoConvergence& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const preq::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
