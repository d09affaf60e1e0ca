#pragma once

#include <span>
#include <string>
#include <vector>

#include "adrc/matrix.hpp"
#include "adrc/plant.hpp"
#include "adrc/trace.hpp"

namespace adrc::observer {

/// Gains of the linear high-gain extended state observer. Characteristic
/// polynomial of the scaled error dynamics: lambda^{n+1} + k1 lambda^n + ... + k_{n+1}.
struct EsoGains {
  Vector k{3.0, 3.0, 1.0};
  double r = 10.0;

  friend bool operator==(const EsoGains&, const EsoGains&) = default;
};

// Empty when valid. Checks length n+1, r >= 1 and the Hurwitz property.
std::vector<std::string> validate(const EsoGains& g, int n);

// xhat'_j = xhat_{j+1} + k_j r^j (y - xhat_1), with u added in channel n and
// no successor state in channel n+1.
void eso_derivative(const EsoGains& g, std::span<const double> xhat, double y, double u, std::span<double> out);
Vector eso_derivative(const EsoGains& g, std::span<const double> xhat, double y, double u);

struct EstimationErrors {
  Vector series;         // xhat_{n+1}(t) - x̄_{n+1}(t)
  double tail_sup = 0.0; // sup over t >= t_final / 2
};

EstimationErrors estimation_errors(const Trace& trace, const plant::DisturbanceOracle& oracle, int agent);

}  // namespace adrc::observer
