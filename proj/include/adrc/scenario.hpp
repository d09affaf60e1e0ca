#pragma once

#include <string>
#include <vector>

#include "adrc/observer.hpp"
#include "adrc/plant.hpp"
#include "adrc/protocol.hpp"
#include "adrc/topology.hpp"

namespace adrc {

struct SimConfig {
  double dt = 1e-3;
  double t_final = 20.0;
  int record_stride = 1;

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

/// Everything needed for one closed-loop experiment.
struct Scenario {
  std::string name;
  int n = 2;
  int m = 1;
  topology::Digraph graph{1, {}};
  std::vector<plant::FollowerSpec> followers;
  plant::LeaderSpec leader;
  observer::EsoGains eso;
  protocol::ProtocolConfig protocol;
  // True when protocol.k came from the Riccati design rather than the file.
  bool k_from_design = false;
  SimConfig sim;
  // Command-line overrides applied on top of the file, e.g. "r=50".
  std::vector<std::string> overrides;
};

inline constexpr int kMaxOrder = 8;

// Cross-module checks: dimensions, spanning tree, Hurwitz k, positive W,
// lower-triangular h, positive saturation levels. Empty when valid.
std::vector<std::string> validate(const Scenario& s);

}  // namespace adrc
