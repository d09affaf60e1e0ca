#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace adrc::harness {

// Small reference scenarios compiled into the library, in scenario-file
// syntax: "zero" (everything at rest), "eso_rig" (one follower with extended
// state sin t) and "smooth" (noise-free loop that never saturates).
std::optional<std::string_view> builtin_scenario(std::string_view name);
std::vector<std::string_view> builtin_scenario_names();

}  // namespace adrc::harness
