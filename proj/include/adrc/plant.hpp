#pragma once

#include <span>
#include <string>
#include <vector>

#include "adrc/expr.hpp"
#include "adrc/matrix.hpp"
#include "adrc/trace.hpp"

namespace adrc::plant {

// Variable order of follower nonlinearities: x1..xn, d.
std::vector<std::string> follower_variables(int n);
// Variable order of the leader input: s1..sn, t.
std::vector<std::string> leader_variables(int n);

/// One follower of the strict-feedback chain
///   x_j' = x_{j+1} + h_j(x_1..x_j, d_j(t)),  x_n' = h_n(x_1..x_n, d_n(t)) + u,
///   y = x_1 + w(t).
/// Each channel j has its own disturbance signal d_j, bound to the variable
/// `d` inside h_j.
struct FollowerSpec {
  std::vector<expr::Expr> h;
  std::vector<expr::Signal> d;
  expr::Signal w;
  Vector x_init;
};

struct LeaderSpec {
  expr::Expr u0;
  Vector x0_init;
};

// Builds a follower from expression text, enforcing the lower-triangular
// structure of h and preparing n derivatives of each d_j and n+1 of w.
// A single entry in `d` is shared by every channel.
FollowerSpec make_follower(int n, const std::vector<std::string>& h, const std::vector<std::string>& d,
                           const std::string& w, Vector x_init);
LeaderSpec make_leader(int n, const std::string& u0, Vector x0_init);

// Empty when valid; otherwise one message per violation.
std::vector<std::string> validate(const FollowerSpec& spec, int n);

void follower_derivative(const FollowerSpec& spec, std::span<const double> x, double u, double t,
                         std::span<double> out);
Vector follower_derivative(const FollowerSpec& spec, std::span<const double> x, double u, double t);

double leader_input(const LeaderSpec& spec, std::span<const double> x0, double t);
void leader_derivative(const LeaderSpec& spec, std::span<const double> x0, double t, std::span<double> out);
Vector leader_derivative(const LeaderSpec& spec, std::span<const double> x0, double t);

inline double measured_output(const FollowerSpec& spec, double x1, double t) { return x1 + spec.w(t); }

/// Reconstruction of the transformed chain x̄_1 = y, x̄_{j+1} = d/dt x̄_j,
/// ending in the extended state x̄_{n+1} = d/dt x̄_n - u.
struct DisturbanceOracle {
  Vector extended;              // x̄_{n+1}
  Vector second_pointwise;      // x_2 + h_1(x_1, d_1) + w'(t); n >= 2 only
  Vector second_differenced;    // d/dt x̄_1 by finite differences; n >= 2 only
};

// Second-order finite difference derivative of uniformly spaced samples:
// central in the interior, one-sided three-point at both ends.
Vector differentiate_samples(std::span<const double> f, double h);

// Throws ValidationError when the trace has fewer than three samples.
DisturbanceOracle total_disturbance_oracle(const Trace& trace, const FollowerSpec& spec, int agent);

}  // namespace adrc::plant
