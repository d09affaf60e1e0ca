#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "adrc/errors.hpp"
#include "adrc/scenario.hpp"
#include "adrc/trace.hpp"

namespace adrc::engine {

/// Right-hand side of the stacked closed loop (leader, followers, observers).
///
/// Per call, in this order: u0 from the leader state; y_i for every agent;
/// theta_i and u_i for every agent from the same observer snapshot; then the
/// leader, follower and observer derivatives. Holds scratch buffers, so one
/// instance must not be shared between threads.
class ClosedLoop {
 public:
  explicit ClosedLoop(const Scenario& scenario);

  const StateLayout& layout() const { return layout_; }

  void derivative(double t, std::span<const double> state, std::span<double> out);

  // Inputs and outputs computed by the most recent derivative() call.
  std::span<const double> last_u() const { return u_; }
  std::span<const double> last_y() const { return y_; }
  double last_u0() const { return u0_; }

 private:
  const Scenario& scenario_;
  StateLayout layout_;
  Vector u_;
  Vector y_;
  Vector theta_;
  double u0_ = 0.0;
};

Vector closed_loop_derivative(const Scenario& scenario, const ClosedLoopState& state);

// Classical four-stage Runge-Kutta step. `f(t, x, dx)` fills dx.
// Throws DivergenceError when a stage produces a non-finite value.
template <class F>
void rk4_step(F&& f, double t, std::vector<double>& state, double dt) {
  const std::size_t size = state.size();
  std::vector<double> k1(size), k2(size), k3(size), k4(size), probe(size);
  auto check = [&](const std::vector<double>& k, double at) {
    for (double v : k)
      if (!std::isfinite(v)) throw DivergenceError("non-finite derivative", at);
  };
  f(t, std::span<const double>(state), std::span<double>(k1));
  check(k1, t);
  for (std::size_t i = 0; i < size; ++i) probe[i] = state[i] + 0.5 * dt * k1[i];
  f(t + 0.5 * dt, std::span<const double>(probe), std::span<double>(k2));
  check(k2, t + 0.5 * dt);
  for (std::size_t i = 0; i < size; ++i) probe[i] = state[i] + 0.5 * dt * k2[i];
  f(t + 0.5 * dt, std::span<const double>(probe), std::span<double>(k3));
  check(k3, t + 0.5 * dt);
  for (std::size_t i = 0; i < size; ++i) probe[i] = state[i] + dt * k3[i];
  f(t + dt, std::span<const double>(probe), std::span<double>(k4));
  check(k4, t + dt);
  for (std::size_t i = 0; i < size; ++i) state[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Step actually used for a scenario: forced to min(dt, 0.25/r) when r > 200.
double effective_step(const SimConfig& sim, double r);
// True when dt exceeds the explicit stability margin 0.5/r.
bool step_too_large(double dt, double r);

inline constexpr double kDivergenceBound = 1e9;

// Integrates from the scenario's initial conditions (observers start at 0).
// Throws DivergenceError when any |state| exceeds kDivergenceBound.
Trace run(const Scenario& scenario);

}  // namespace adrc::engine
