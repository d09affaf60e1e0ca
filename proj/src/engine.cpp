#include "adrc/engine.hpp"

#include <cmath>
#include <cstdio>
#include <algorithm>
#include <string>

#include "adrc/protocol.hpp"

namespace adrc::engine {

ClosedLoop::ClosedLoop(const Scenario& scenario)
    : scenario_(scenario),
      layout_{scenario.n, scenario.m},
      u_(static_cast<std::size_t>(scenario.m)),
      y_(static_cast<std::size_t>(scenario.m)),
      theta_(static_cast<std::size_t>(scenario.n)) {}

void ClosedLoop::derivative(double t, std::span<const double> state, std::span<double> out) {
  const auto n = static_cast<std::size_t>(layout_.n);
  const auto x0 = state.subspan(layout_.leader(), n);
  const auto xhat_block = state.subspan(layout_.observers(), static_cast<std::size_t>(layout_.m) * (n + 1));

  u0_ = plant::leader_input(scenario_.leader, x0, t);
  for (int i = 0; i < layout_.m; ++i) {
    const auto& spec = scenario_.followers[static_cast<std::size_t>(i)];
    y_[static_cast<std::size_t>(i)] = plant::measured_output(spec, state[layout_.follower(i)], t);
  }
  for (int i = 0; i < layout_.m; ++i) {
    protocol::aggregate_theta(scenario_.graph, xhat_block, x0, i, theta_);
    const double xhat_ext = state[layout_.observer(i) + n];
    u_[static_cast<std::size_t>(i)] = protocol::control_law(scenario_.protocol, i, theta_, xhat_ext, u0_);
  }

  for (std::size_t k = 0; k + 1 < n; ++k) out[k] = x0[k + 1];
  out[n - 1] = u0_;
  for (int i = 0; i < layout_.m; ++i) {
    const auto ui = u_[static_cast<std::size_t>(i)];
    plant::follower_derivative(scenario_.followers[static_cast<std::size_t>(i)], state.subspan(layout_.follower(i), n),
                               ui, t, out.subspan(layout_.follower(i), n));
    observer::eso_derivative(scenario_.eso, state.subspan(layout_.observer(i), n + 1), y_[static_cast<std::size_t>(i)],
                             ui, out.subspan(layout_.observer(i), n + 1));
  }
}

Vector closed_loop_derivative(const Scenario& scenario, const ClosedLoopState& state) {
  ClosedLoop loop(scenario);
  const Vector flat = state.pack();
  Vector out(flat.size());
  loop.derivative(state.t, flat, out);
  return out;
}

double effective_step(const SimConfig& sim, double r) {
  if (r > 200.0) return std::min(sim.dt, 0.25 / r);
  return sim.dt;
}

bool step_too_large(double dt, double r) { return dt > 0.5 / r; }

namespace {

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

Trace run(const Scenario& scenario) {
  const double r = scenario.eso.r;
  const double dt = effective_step(scenario.sim, r);
  const auto steps = static_cast<long long>(std::llround(scenario.sim.t_final / dt));
  const int stride = scenario.sim.record_stride;

  ClosedLoop loop(scenario);
  const StateLayout& layout = loop.layout();

  std::vector<double> state(layout.size(), 0.0);
  std::copy(scenario.leader.x0_init.begin(), scenario.leader.x0_init.end(), state.begin());
  for (int i = 0; i < scenario.m; ++i) {
    const auto& init = scenario.followers[static_cast<std::size_t>(i)].x_init;
    std::copy(init.begin(), init.end(), state.begin() + static_cast<std::ptrdiff_t>(layout.follower(i)));
  }

  Trace trace(scenario.n, scenario.m);
  trace.set_spacing(dt * stride);
  trace.metadata.emplace_back("scenario", scenario.name);
  trace.metadata.emplace_back("r", format_g(r));
  trace.metadata.emplace_back("dt", format_g(dt));
  trace.metadata.emplace_back("record_stride", std::to_string(stride));
  std::string k_text;
  for (double k : scenario.protocol.k) k_text += (k_text.empty() ? "" : " ") + format_g(k);
  trace.metadata.emplace_back("K", k_text);
  trace.metadata.emplace_back("leader_feedforward", scenario.protocol.leader_feedforward ? "true" : "false");
  for (const auto& o : scenario.overrides) trace.metadata.emplace_back("override", o);
  if (dt != scenario.sim.dt) trace.metadata.emplace_back("warning", "dt reduced to " + format_g(dt) + " for r > 200");
  if (step_too_large(dt, r)) {
    trace.metadata.emplace_back("warning", "dt " + format_g(dt) + " exceeds 0.5/r; observer poles may be unstable");
  }

  std::vector<double> scratch(layout.size());
  auto record = [&](double t) {
    loop.derivative(t, state, scratch);
    trace.append(t, state, loop.last_u(), loop.last_y());
  };
  auto rhs = [&loop](double t, std::span<const double> x, std::span<double> dx) { loop.derivative(t, x, dx); };

  record(0.0);
  for (long long step = 1; step <= steps; ++step) {
    const double t_prev = static_cast<double>(step - 1) * dt;
    rk4_step(rhs, t_prev, state, dt);
    const double t = static_cast<double>(step) * dt;
    for (double v : state) {
      if (!(std::fabs(v) <= kDivergenceBound)) throw DivergenceError("state magnitude exceeded 1e9", t);
    }
    if (step % stride == 0) record(t);
  }
  return trace;
}

}  // namespace adrc::engine
