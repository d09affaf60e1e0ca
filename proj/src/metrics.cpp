#include "adrc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "adrc/engine.hpp"
#include "adrc/errors.hpp"
#include "adrc/scenario_io.hpp"

namespace adrc::harness {

MetricsReport compute_metrics(const Trace& trace, std::span<const plant::DisturbanceOracle> oracles) {
  const int n = trace.order();
  const int m = trace.followers();
  MetricsReport report;
  report.agents.resize(static_cast<std::size_t>(m));
  const std::size_t tail = trace.tail_start();

  for (std::size_t k = 0; k < trace.size(); ++k) {
    double stacked = 0.0;
    for (int i = 0; i < m; ++i) {
      double agent = 0.0;
      for (int q = 0; q < n; ++q) agent += trace.x(k, i, q) * trace.x(k, i, q);
      stacked += agent;
      auto& a = report.agents[static_cast<std::size_t>(i)];
      a.max_state_norm = std::max(a.max_state_norm, std::sqrt(agent));
      if (k >= tail) a.tail_sup_tracking = std::max(a.tail_sup_tracking, std::fabs(trace.y(k, i) - trace.x0(k, 0)));
    }
    report.max_state_norm = std::max(report.max_state_norm, std::sqrt(stacked));
  }
  for (int i = 0; i < m && static_cast<std::size_t>(i) < oracles.size(); ++i) {
    report.agents[static_cast<std::size_t>(i)].tail_sup_estimation =
        observer::estimation_errors(trace, oracles[static_cast<std::size_t>(i)], i).tail_sup;
  }
  for (const auto& meta : trace.metadata) {
    if (meta.first == "r") report.r = std::stod(meta.second);
  }
  return report;
}

RunResult simulate(const Scenario& scenario) {
  RunResult result;
  try {
    result.trace = engine::run(scenario);
  } catch (const DivergenceError& e) {
    result.metrics.r = scenario.eso.r;
    result.metrics.diverged = true;
    result.metrics.divergence_time = e.time();
    result.metrics.divergence_message = e.what();
    const double inf = std::numeric_limits<double>::infinity();
    result.metrics.max_state_norm = inf;
    result.metrics.agents.assign(static_cast<std::size_t>(scenario.m), AgentMetrics{inf, inf, inf});
    return result;
  }
  for (int i = 0; i < scenario.m; ++i) {
    result.oracles.push_back(
        plant::total_disturbance_oracle(result.trace, scenario.followers[static_cast<std::size_t>(i)], i));
    result.estimation.push_back(observer::estimation_errors(result.trace, result.oracles.back(), i));
  }
  result.metrics = compute_metrics(result.trace, result.oracles);
  result.metrics.r = scenario.eso.r;
  return result;
}

std::vector<MetricsReport> sweep(const Scenario& scenario, std::span<const double> r_values) {
  if (r_values.empty()) throw ValidationError("sweep needs at least one r value");
  for (double r : r_values) {
    if (!(r >= 1.0)) throw ValidationError("sweep r values must be >= 1");
  }
  std::vector<std::future<MetricsReport>> jobs;
  for (double r : r_values) {
    Scenario copy = scenario;
    override_r(copy, r);
    jobs.push_back(std::async(std::launch::async, [copy = std::move(copy)] { return simulate(copy).metrics; }));
  }
  std::vector<MetricsReport> out;
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

}  // namespace adrc::harness
