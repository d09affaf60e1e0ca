#include "adrc/protocol.hpp"

#include <cmath>

#include "adrc/errors.hpp"

namespace adrc::protocol {

std::vector<std::string> validate(const ProtocolConfig& cfg, int n, int m) {
  std::vector<std::string> errors;
  if (cfg.k.size() != static_cast<std::size_t>(n)) errors.push_back("protocol K must have n entries");
  if (!(cfg.m_level > 0.0)) errors.emplace_back("protocol M must be positive");
  if (cfg.n_levels.size() != static_cast<std::size_t>(m)) errors.push_back("protocol N must have m entries");
  for (double level : cfg.n_levels) {
    if (!(level > 0.0)) {
      errors.emplace_back("protocol N levels must be positive");
      break;
    }
  }
  return errors;
}

double saturation(double theta, double s) {
  const double mag = std::fabs(s);
  double out;
  if (mag <= theta) {
    out = mag;
  } else if (mag <= theta + 1.0) {
    out = -0.5 * mag * mag + (theta + 1.0) * mag - 0.5 * theta * theta;
  } else {
    out = theta + 0.5;
  }
  return std::copysign(out, s);
}

void aggregate_theta(const topology::Digraph& g, std::span<const double> xhat, std::span<const double> x0,
                     int agent, std::span<double> out) {
  const std::size_t n = x0.size();
  const std::size_t stride = n + 1;
  const auto self = xhat.subspan(static_cast<std::size_t>(agent) * stride, n);
  // Vertex numbering in the graph is 1-based for followers.
  const int vertex = agent + 1;
  for (std::size_t q = 0; q < n; ++q) out[q] = 0.0;
  for (int j : g.follower_neighbors(vertex)) {
    const auto other = xhat.subspan(static_cast<std::size_t>(j - 1) * stride, n);
    for (std::size_t q = 0; q < n; ++q) out[q] += self[q] - other[q];
  }
  if (g.hears_leader(vertex)) {
    for (std::size_t q = 0; q < n; ++q) out[q] += self[q] - x0[q];
  }
}

Vector aggregate_theta(const topology::Digraph& g, std::span<const double> xhat, std::span<const double> x0,
                       int agent) {
  Vector out(x0.size());
  aggregate_theta(g, xhat, x0, agent, out);
  return out;
}

double control_law(const ProtocolConfig& cfg, int agent, std::span<const double> theta, double xhat_extended,
                   double u0_value) {
  double feedback = 0.0;
  for (std::size_t q = 0; q < theta.size(); ++q) feedback += cfg.k[q] * theta[q];
  double u = saturation(cfg.m_level, feedback) - saturation(cfg.n_levels[static_cast<std::size_t>(agent)], xhat_extended);
  if (cfg.leader_feedforward) u += u0_value;
  return u;
}

GainDesign design_gains(const topology::Digraph& g, int n) {
  GainDesign out;
  out.laplacian = topology::decompose(g);
  out.riccati = linalg::solve_care(static_cast<std::size_t>(n), out.laplacian.mu0);
  return out;
}

}  // namespace adrc::protocol
