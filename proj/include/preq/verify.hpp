#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "preq/io.hpp"
#include "preq/parallel.hpp"

namespace preq {

struct VerifyOptions {
  std::uint64_t seed = 20260810;
  ExecMode mode = default_exec();
  std::map<std::string, double> tolerance_overrides;  // by check name
};

/// Every invariant suite: observable core, brackets, flow diagnostics, the
/// lift identities, the operator conditions, the quantum sphere checks and
/// the serial/parallel agreement check.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

/// The operator-focused subset with per-pair detail: Dirac residual for each
/// corpus pair, the (q1, p1) commutator identity, the identity condition, the
/// normalization check and the symmetry defects.
std::vector<CheckResult> run_opcheck(const VerifyOptions& opts);

/// True when every check passed.
bool all_passed(const std::vector<CheckResult>& checks);

}  // namespace preq
