#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "preq/flow.hpp"
#include "preq/lift.hpp"
#include "preq/prequantum.hpp"
#include "preq/quantum.hpp"

namespace preq {

/// A scenario config file (JSON). Expression fields are kept as text here and
/// compiled by the accessors below, which throw the usual parse errors.
struct Scenario {
  std::string name;
  int n = 1;
  double hbar = 1.0;
  std::string hamiltonian;
  std::optional<std::pair<std::string, std::string>> separable_split;  // T, V
  std::vector<double> q0, p0;
  double theta0 = 0.0;
  IntegratorKind integrator = IntegratorKind::implicit_midpoint;
  double dt = 0.0;
  long steps = 0;
  std::vector<std::string> observables;
  std::vector<std::pair<std::string, std::string>> sections;  // re, im
  std::uint64_t seed = 20260810;
};

/// Loads and validates a scenario. Validation failures (bad JSON, expression
/// errors, split violations, length mismatches) throw ConfigError or the
/// specific expression error.
Scenario load_scenario(const std::filesystem::path& path);

HamiltonianSystem compile_system(const Scenario& sc);
PhasePoint initial_point(const Scenario& sc);
LiftedPoint initial_lifted_point(const Scenario& sc);
std::vector<Observable> compile_observables(const Scenario& sc);
std::vector<Section> compile_sections(const Scenario& sc);

IntegratorKind integrator_from_name(const std::string& name);
std::string integrator_name(IntegratorKind kind);

/// Input for the quantum subcommand.
struct QuantumSpec {
  std::string name;
  int dim = 0;
  CMatrix hamiltonian;
  std::vector<cplx> psi0;
  double hbar = 1.0;
  std::vector<double> times;
};

QuantumSpec load_quantum_spec(const std::filesystem::path& path);

}  // namespace preq
