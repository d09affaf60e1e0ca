#include "adrc/observer.hpp"

#include <algorithm>
#include <cmath>

#include "adrc/linalg.hpp"

namespace adrc::observer {

std::vector<std::string> validate(const EsoGains& g, int n) {
  std::vector<std::string> errors;
  if (g.k.size() != static_cast<std::size_t>(n + 1)) {
    errors.push_back("observer k must have n+1 = " + std::to_string(n + 1) + " entries");
  } else {
    Vector poly{1.0};
    poly.insert(poly.end(), g.k.begin(), g.k.end());
    if (!linalg::hurwitz_check(poly)) errors.emplace_back("observer k is not Hurwitz");
  }
  if (!(g.r >= 1.0)) errors.emplace_back("observer r must be >= 1");
  return errors;
}

void eso_derivative(const EsoGains& g, std::span<const double> xhat, double y, double u, std::span<double> out) {
  const std::size_t last = xhat.size() - 1;  // index of the extended state
  const double innovation = y - xhat[0];
  double rp = 1.0;
  for (std::size_t j = 0; j < last; ++j) {
    rp *= g.r;
    out[j] = xhat[j + 1] + g.k[j] * rp * innovation;
  }
  out[last - 1] += u;
  out[last] = g.k[last] * rp * g.r * innovation;
}

Vector eso_derivative(const EsoGains& g, std::span<const double> xhat, double y, double u) {
  Vector out(xhat.size());
  eso_derivative(g, xhat, y, u, out);
  return out;
}

EstimationErrors estimation_errors(const Trace& trace, const plant::DisturbanceOracle& oracle, int agent) {
  const int n = trace.order();
  EstimationErrors out;
  out.series.resize(trace.size());
  for (std::size_t k = 0; k < trace.size(); ++k) out.series[k] = trace.xhat(k, agent, n) - oracle.extended[k];
  for (std::size_t k = trace.tail_start(); k < trace.size(); ++k) {
    out.tail_sup = std::max(out.tail_sup, std::fabs(out.series[k]));
  }
  return out;
}

}  // namespace adrc::observer
