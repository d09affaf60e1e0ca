#pragma once

#include <span>
#include <string>
#include <vector>

#include "adrc/linalg.hpp"
#include "adrc/matrix.hpp"
#include "adrc/topology.hpp"

namespace adrc::protocol {

struct ProtocolConfig {
  Vector k;                  // feedback row, K = -B^T P
  double m_level = 5.0;      // saturation level of the feedback term
  Vector n_levels;           // per-agent saturation level of the compensation term
  bool leader_feedforward = true;

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

std::vector<std::string> validate(const ProtocolConfig& cfg, int n, int m);

// C^1 odd saturation: identity on [0, theta], quadratic blend on
// (theta, theta + 1], constant theta + 1/2 beyond.
double saturation(double theta, double s);

// theta_i = sum_j a_ij (xhat_i - xhat_j) + a_i0 (xhat_i - x0), first n
// observer components only. `xhat` is the m x (n+1) observer block, row-major.
void aggregate_theta(const topology::Digraph& g, std::span<const double> xhat, std::span<const double> x0,
                     int agent, std::span<double> out);
Vector aggregate_theta(const topology::Digraph& g, std::span<const double> xhat, std::span<const double> x0,
                       int agent);

// sat_M(K theta) - sat_{N_i}(xhat_{n+1}) (+ u0 with feedforward).
double control_law(const ProtocolConfig& cfg, int agent, std::span<const double> theta, double xhat_extended,
                   double u0_value);

struct GainDesign {
  topology::LaplacianDecomposition laplacian;
  linalg::RiccatiSolution riccati;
};

GainDesign design_gains(const topology::Digraph& g, int n);

}  // namespace adrc::protocol
