#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "adrc/errors.hpp"
#include "adrc/scenario.hpp"

namespace adrc::harness {

/// Every problem found while reading a scenario, one message per entry,
/// prefixed with `origin:line:` where a line is known.
class ScenarioError : public ValidationError {
 public:
  explicit ScenarioError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Sectioned text format:
//
//   # comment
//   [meta]        name, n, m
//   [topology]    one `j -> i` edge per line (0 is the leader)
//   [leader]      u0 = "<expr in s1..sn, t>", init = a, b
//   [agent.i]     h1..hn = "<expr in x1..xj, d>", d1..dn (or d) and w = "<expr in t>", init
//   [observer]    k = k1, ..., k_{n+1}; r
//   [protocol]    K = k1, ..., kn | design; M; N (scalar or m values); leader_feedforward
//   [sim]         dt, t_final, record_stride
//
// Throws ScenarioError listing all problems.
Scenario parse_scenario(std::string_view text, std::string_view origin = "<scenario>");
// "builtin:<name>" loads one of builtin_scenario_names().
Scenario load_scenario(const std::filesystem::path& path);

std::string serialize_scenario(const Scenario& s);

// Same structure, expressions and numbers (used for round-trip checks).
bool equivalent(const Scenario& a, const Scenario& b);

// Sets the observer gain and records "r=<value>" in the override log.
void override_r(Scenario& s, double r);

}  // namespace adrc::harness
