#include "adrc/builtin_scenarios.hpp"

#include <array>
#include <utility>

namespace adrc::harness {

namespace {

constexpr std::string_view kZero = R"scn(# Everything at rest: no nonlinearities, disturbances or noise.

[meta]
name = "zero"
n = 2
m = 2

[topology]
0 -> 1
1 -> 2

[leader]
u0 = "0"
init = 0, 0

[agent.1]
h1 = "0"
h2 = "0"
init = 0, 0

[agent.2]
h1 = "0"
h2 = "0"
init = 0, 0

[observer]
k = 3, 3, 1
r = 10

[protocol]
K = design
leader_feedforward = true

[sim]
dt = 1e-3
t_final = 5
record_stride = 10
)scn";

constexpr std::string_view kEsoRig = R"scn(# Single follower whose extended state is exactly sin(t): h2 = d2 = sin(t),
# no other nonlinearity and no noise. The leader rests at the origin.

[meta]
name = "eso_rig"
n = 2
m = 1

[topology]
0 -> 1

[leader]
u0 = "0"
init = 0, 0

[agent.1]
h1 = "0"
h2 = "d"
d2 = "sin(t)"
w = "0"
init = 0.2, -0.1

[observer]
k = 3, 3, 1
r = 10

[protocol]
K = design
M = 5
N = 5
leader_feedforward = false

[sim]
dt = 1e-3
t_final = 20
record_stride = 1
)scn";

constexpr std::string_view kSmooth = R"scn(# Smooth noise-free closed loop used for integrator convergence checks.
# Small initial offsets keep both saturations on their identity branch, so
# the right-hand side is analytic along the trajectory.

[meta]
name = "smooth"
n = 2
m = 2

[topology]
0 -> 1
1 -> 2

[leader]
u0 = "-s1 - 2*s2"
init = 0.05, 0

[agent.1]
h1 = "0.1*sin(x1)"
h2 = "-0.2*x2 + 0.1*d"
d = "sin(t)"
init = 0.04, 0

[agent.2]
h1 = "0.1*sin(x1)"
h2 = "-0.2*x2 + 0.1*d"
d = "cos(t)"
init = 0.06, 0.01

[observer]
k = 3, 3, 1
r = 5

[protocol]
K = design
leader_feedforward = true

[sim]
dt = 0.01
t_final = 5
record_stride = 1
)scn";

constexpr std::array<std::pair<std::string_view, std::string_view>, 3> kBuiltins{{
    {"zero", kZero},
    {"eso_rig", kEsoRig},
    {"smooth", kSmooth},
}};

}  // namespace

std::optional<std::string_view> builtin_scenario(std::string_view name) {
  for (const auto& [key, text] : kBuiltins) {
    if (key == name) return text;
  }
  return std::nullopt;
}

std::vector<std::string_view> builtin_scenario_names() {
  std::vector<std::string_view> names;
  for (const auto& entry : kBuiltins) names.push_back(entry.first);
  return names;
}

}  // namespace adrc::harness
