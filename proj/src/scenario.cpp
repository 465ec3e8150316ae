#include "preq/scenario.hpp"

#include <fstream>

#include <json.hpp>

namespace preq {

using json = nlohmann::json;

IntegratorKind integrator_from_name(const std::string& name) {
  if (name == "rk4") return IntegratorKind::rk4;
  if (name == "stormer_verlet") return IntegratorKind::stormer_verlet;
  if (name == "implicit_midpoint") return IntegratorKind::implicit_midpoint;
  throw ConfigError("unknown integrator '" + name +
                    "' (expected rk4, stormer_verlet or implicit_midpoint)");
}

std::string integrator_name(IntegratorKind kind) {
  switch (kind) {
    case IntegratorKind::rk4: return "rk4";
    case IntegratorKind::stormer_verlet: return "stormer_verlet";
    case IntegratorKind::implicit_midpoint: return "implicit_midpoint";
  }
  return "?";
}

namespace {

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

std::vector<double> double_list(const json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string(key) + " must be an array");
  std::vector<double> out;
  for (const json& v : j) {
    if (!v.is_number()) throw ConfigError(std::string(key) + " must be numeric");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
  Scenario sc;
  sc.name = j.value("name", path.stem().string());
  if (!j.contains("n")) throw ConfigError("scenario needs a dimension 'n'");
  sc.n = j.at("n").get<int>();
  if (sc.n <= 0) throw ConfigError("dimension n must be positive");
  sc.hbar = j.value("hbar", 1.0);
  if (!(sc.hbar > 0)) throw ConfigError("hbar must be positive");
  if (!j.contains("hamiltonian"))
    throw ConfigError("scenario needs a 'hamiltonian' expression");
  sc.hamiltonian = j.at("hamiltonian").get<std::string>();
  if (j.contains("separable_split")) {
    const json& s = j.at("separable_split");
    sc.separable_split = {s.at("T").get<std::string>(),
                          s.at("V").get<std::string>()};
  }
  if (j.contains("initial")) {
    const json& init = j.at("initial");
    sc.q0 = double_list(init.at("q"), "initial.q");
    sc.p0 = double_list(init.at("p"), "initial.p");
    sc.theta0 = init.value("theta", 0.0);
  }
  if (static_cast<int>(sc.q0.size()) != sc.n ||
      static_cast<int>(sc.p0.size()) != sc.n)
    throw ConfigError("initial q and p must have length n = " +
                      std::to_string(sc.n));
  sc.integrator =
      integrator_from_name(j.value("integrator", std::string("implicit_midpoint")));
  sc.dt = j.value("dt", 0.0);
  if (!(sc.dt > 0)) throw ConfigError("dt must be positive");
  sc.steps = j.value("steps", 0L);
  if (sc.steps < 0) throw ConfigError("steps must be non-negative");
  if (j.contains("observables"))
    for (const json& o : j.at("observables"))
      sc.observables.push_back(o.get<std::string>());
  if (j.contains("sections"))
    for (const json& s : j.at("sections"))
      sc.sections.push_back(
          {s.at("re").get<std::string>(), s.value("im", std::string("0"))});
  sc.seed = j.value("seed", std::uint64_t{20260810});

  // Compile everything once so config errors surface at load time.
  compile_system(sc);
  compile_observables(sc);
  compile_sections(sc);
  return sc;
}

HamiltonianSystem compile_system(const Scenario& sc) {
  const Observable H = parse_observable(sc.hamiltonian, sc.n);
  if (sc.separable_split) {
    SeparableSplit split{parse_observable(sc.separable_split->first, sc.n),
                         parse_observable(sc.separable_split->second, sc.n)};
    return HamiltonianSystem(H, std::move(split));
  }
  return HamiltonianSystem(H);
}

PhasePoint initial_point(const Scenario& sc) { return {sc.q0, sc.p0}; }

LiftedPoint initial_lifted_point(const Scenario& sc) {
  return {initial_point(sc), sc.theta0};
}

std::vector<Observable> compile_observables(const Scenario& sc) {
  std::vector<Observable> out;
  out.reserve(sc.observables.size());
  for (const std::string& text : sc.observables)
    out.push_back(parse_observable(text, sc.n));
  return out;
}

std::vector<Section> compile_sections(const Scenario& sc) {
  std::vector<Section> out;
  out.reserve(sc.sections.size());
  for (const auto& [re, im] : sc.sections)
    out.push_back(make_section(parse_observable(re, sc.n),
                               parse_observable(im, sc.n)));
  return out;
}

QuantumSpec load_quantum_spec(const std::filesystem::path& path) {
  const json j = load_json(path);
  if (!j.is_object()) throw ConfigError("quantum spec must be a JSON object");
  QuantumSpec spec;
  spec.name = j.value("name", path.stem().string());
  spec.dim = j.value("dim", 0);
  if (spec.dim <= 0) throw ConfigError("quantum spec needs a positive 'dim'");
  spec.hbar = j.value("hbar", 1.0);
  if (!(spec.hbar > 0)) throw ConfigError("hbar must be positive");

  auto read_complex = [](const json& v, const char* what) -> cplx {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw ConfigError(std::string(what) + " entries must be [re, im] pairs");
    return {v[0].get<double>(), v[1].get<double>()};
  };

  if (!j.contains("hamiltonian"))
    throw ConfigError("quantum spec needs a 'hamiltonian' matrix");
  const json& rows = j.at("hamiltonian");
  if (!rows.is_array() || static_cast<int>(rows.size()) != spec.dim)
    throw ConfigError("hamiltonian must have dim rows");
  spec.hamiltonian = CMatrix(spec.dim);
  for (int i = 0; i < spec.dim; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != spec.dim)
      throw ConfigError("hamiltonian row " + std::to_string(i) +
                        " must have dim entries");
    for (int k = 0; k < spec.dim; ++k)
      spec.hamiltonian(i, k) = read_complex(row[k], "hamiltonian");
  }

  if (!j.contains("psi0")) throw ConfigError("quantum spec needs 'psi0'");
  const json& psi = j.at("psi0");
  if (!psi.is_array() || static_cast<int>(psi.size()) != spec.dim)
    throw ConfigError("psi0 must have dim entries");
  for (const json& v : psi) spec.psi0.push_back(read_complex(v, "psi0"));

  if (j.contains("times")) spec.times = double_list(j.at("times"), "times");
  return spec;
}

}  // namespace preq
