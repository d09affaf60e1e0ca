#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adrc/observer.hpp"
#include "adrc/plant.hpp"
#include "adrc/scenario.hpp"
#include "adrc/trace.hpp"

namespace adrc::harness {

struct AgentMetrics {
  double tail_sup_tracking = 0.0;    // sup_{t >= T/2} |y_i - y_0|
  double tail_sup_estimation = 0.0;  // sup_{t >= T/2} |xhat_{i,n+1} - x̄_{i,n+1}|
  double max_state_norm = 0.0;       // sup_t ||x_i(t)||
};

struct MetricsReport {
  double r = 0.0;
  std::vector<AgentMetrics> agents;
  double max_state_norm = 0.0;  // sup_t of the norm of all follower states stacked
  bool diverged = false;
  double divergence_time = 0.0;
  std::string divergence_message;
};

// Leader output is y_0 = x_01; the tail window is the second half of the trace.
MetricsReport compute_metrics(const Trace& trace, std::span<const plant::DisturbanceOracle> oracles);

/// One simulated run together with its post-processing.
struct RunResult {
  Trace trace;
  std::vector<plant::DisturbanceOracle> oracles;
  std::vector<observer::EstimationErrors> estimation;
  MetricsReport metrics;
};

// Runs the engine and evaluates metrics. Divergence is reported in
// metrics.diverged rather than thrown.
RunResult simulate(const Scenario& scenario);

// One run per r (each on its own copy of the scenario, concurrently).
std::vector<MetricsReport> sweep(const Scenario& scenario, std::span<const double> r_values);

}  // namespace adrc::harness
