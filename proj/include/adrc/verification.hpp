#pragma once

#include <string>
#include <vector>

namespace adrc::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Invariant suite behind `adrc verify`: topology, matrix kit, saturation,
// observer scaling and integrator convergence. Uses built-in scenarios only.
std::vector<CheckResult> run_verification();

}  // namespace adrc::harness
