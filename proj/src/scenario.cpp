#include "adrc/scenario.hpp"

#include "adrc/errors.hpp"

namespace adrc {

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> errors;
  auto append = [&](const std::string& prefix, const std::vector<std::string>& more) {
    for (const auto& e : more) errors.push_back(prefix + e);
  };
  if (s.n < 1 || s.n > kMaxOrder) errors.push_back("n must be in 1.." + std::to_string(kMaxOrder));
  if (s.graph.followers() != s.m) errors.emplace_back("topology follower count differs from m");
  if (!topology::check_spanning_tree(s.graph)) {
    errors.emplace_back("no directed spanning tree rooted at the leader");
  } else {
    try {
      (void)topology::decompose(s.graph);
    } catch (const ValidationError& e) {
      errors.emplace_back(e.what());
    }
  }
  if (s.followers.size() != static_cast<std::size_t>(s.m)) errors.push_back("expected " + std::to_string(s.m) + " agent sections");
  for (std::size_t i = 0; i < s.followers.size(); ++i) {
    append("agent." + std::to_string(i + 1) + ": ", plant::validate(s.followers[i], s.n));
  }
  if (s.leader.x0_init.size() != static_cast<std::size_t>(s.n)) errors.emplace_back("leader init must have n entries");
  if (s.leader.u0.variables() != plant::leader_variables(s.n)) errors.emplace_back("leader u0 has the wrong variable set");
  append("observer: ", observer::validate(s.eso, s.n));
  append("protocol: ", protocol::validate(s.protocol, s.n, s.m));
  if (!(s.sim.dt > 0.0)) errors.emplace_back("sim dt must be positive");
  if (!(s.sim.t_final >= s.sim.dt)) errors.emplace_back("sim t_final must be >= dt");
  if (s.sim.record_stride < 1) errors.emplace_back("sim record_stride must be >= 1");
  return errors;
}

}  // namespace adrc
