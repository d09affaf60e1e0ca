#include "adrc/plant.hpp"

#include <array>
#include <string>

#include "adrc/errors.hpp"

namespace adrc::plant {

namespace {

// Small stack buffer for the expression arguments (n <= 8, plus d or t).
using Args = std::array<double, 16>;

double eval_h(const FollowerSpec& spec, std::size_t j, std::span<const double> x, double t, Args& args) {
  const std::size_t n = x.size();
  for (std::size_t k = 0; k < n; ++k) args[k] = x[k];
  args[n] = spec.d[j](t);
  return spec.h[j].evaluate(std::span<const double>(args.data(), n + 1));
}

}  // namespace

std::vector<std::string> follower_variables(int n) {
  std::vector<std::string> vars;
  for (int j = 1; j <= n; ++j) vars.push_back("x" + std::to_string(j));
  vars.emplace_back("d");
  return vars;
}

std::vector<std::string> leader_variables(int n) {
  std::vector<std::string> vars;
  for (int j = 1; j <= n; ++j) vars.push_back("s" + std::to_string(j));
  vars.emplace_back("t");
  return vars;
}

FollowerSpec make_follower(int n, const std::vector<std::string>& h, const std::vector<std::string>& d,
                           const std::string& w, Vector x_init) {
  FollowerSpec spec;
  const auto vars = follower_variables(n);
  for (const auto& src : h) spec.h.push_back(expr::parse_expr(src, vars));
  for (const auto& src : d) spec.d.push_back(expr::Signal::parse(src, n));
  if (spec.d.size() == 1 && n > 1) spec.d.resize(static_cast<std::size_t>(n), spec.d.front());
  spec.w = expr::Signal::parse(w, n + 1);
  spec.x_init = std::move(x_init);
  if (auto errors = validate(spec, n); !errors.empty()) throw ValidationError(errors.front());
  return spec;
}

LeaderSpec make_leader(int n, const std::string& u0, Vector x0_init) {
  if (x0_init.size() != static_cast<std::size_t>(n)) throw ValidationError("leader init must have n entries");
  return LeaderSpec{expr::parse_expr(u0, leader_variables(n)), std::move(x0_init)};
}

std::vector<std::string> validate(const FollowerSpec& spec, int n) {
  std::vector<std::string> errors;
  const auto count = static_cast<std::size_t>(n);
  if (spec.h.size() != count) errors.push_back("expected " + std::to_string(n) + " nonlinearities h1..h" + std::to_string(n));
  if (spec.d.size() != count) errors.push_back("expected " + std::to_string(n) + " disturbance signals d1..d" + std::to_string(n));
  if (spec.x_init.size() != count) errors.push_back("init must have " + std::to_string(n) + " entries");
  for (std::size_t j = 0; j < spec.h.size(); ++j) {
    if (spec.h[j].variables() != follower_variables(n)) {
      errors.push_back("h" + std::to_string(j + 1) + " has the wrong variable set");
      continue;
    }
    for (std::size_t k = j + 1; k < count; ++k) {
      if (spec.h[j].uses(static_cast<int>(k))) {
        errors.push_back("h" + std::to_string(j + 1) + " depends on x" + std::to_string(k + 1) +
                         " (h_j may only use x1..xj and d)");
      }
    }
  }
  for (std::size_t j = 0; j < spec.d.size(); ++j) {
    if (spec.d[j].max_order() < n) errors.push_back("d" + std::to_string(j + 1) + " needs " + std::to_string(n) + " derivatives");
  }
  if (spec.w.max_order() < n + 1) errors.push_back("w needs " + std::to_string(n + 1) + " derivatives");
  return errors;
}

void follower_derivative(const FollowerSpec& spec, std::span<const double> x, double u, double t,
                         std::span<double> out) {
  const std::size_t n = x.size();
  Args args{};
  for (std::size_t j = 0; j + 1 < n; ++j) out[j] = x[j + 1] + eval_h(spec, j, x, t, args);
  out[n - 1] = eval_h(spec, n - 1, x, t, args) + u;
}

Vector follower_derivative(const FollowerSpec& spec, std::span<const double> x, double u, double t) {
  Vector out(x.size());
  follower_derivative(spec, x, u, t, out);
  return out;
}

double leader_input(const LeaderSpec& spec, std::span<const double> x0, double t) {
  Args args{};
  const std::size_t n = x0.size();
  for (std::size_t k = 0; k < n; ++k) args[k] = x0[k];
  args[n] = t;
  return spec.u0.evaluate(std::span<const double>(args.data(), n + 1));
}

void leader_derivative(const LeaderSpec& spec, std::span<const double> x0, double t, std::span<double> out) {
  const std::size_t n = x0.size();
  for (std::size_t k = 0; k + 1 < n; ++k) out[k] = x0[k + 1];
  out[n - 1] = leader_input(spec, x0, t);
}

Vector leader_derivative(const LeaderSpec& spec, std::span<const double> x0, double t) {
  Vector out(x0.size());
  leader_derivative(spec, x0, t, out);
  return out;
}

Vector differentiate_samples(std::span<const double> f, double h) {
  const std::size_t count = f.size();
  if (count < 3) throw ValidationError("finite differences need at least 3 samples");
  Vector out(count);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < count; ++k) out[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
  out[count - 1] = (3.0 * f[count - 1] - 4.0 * f[count - 2] + f[count - 3]) / (2.0 * h);
  return out;
}

DisturbanceOracle total_disturbance_oracle(const Trace& trace, const FollowerSpec& spec, int agent) {
  const std::size_t count = trace.size();
  if (count < 3) throw ValidationError("trace too short for the disturbance oracle");
  const int n = trace.order();
  const double h = trace.spacing();

  Vector level(count);
  for (std::size_t k = 0; k < count; ++k) level[k] = trace.x(k, agent, 0) + spec.w(trace.time(k));

  DisturbanceOracle out;
  int reached = 1;  // index of the chain level held in `level`
  if (n >= 2) {
    out.second_differenced = differentiate_samples(level, h);
    out.second_pointwise.resize(count);
    Args args{};
    for (std::size_t k = 0; k < count; ++k) {
      const double t = trace.time(k);
      Vector x(static_cast<std::size_t>(n));
      for (int q = 0; q < n; ++q) x[static_cast<std::size_t>(q)] = trace.x(k, agent, q);
      out.second_pointwise[k] = x[1] + eval_h(spec, 0, x, t, args) + spec.w.derivative(1, t);
    }
    level = out.second_pointwise;
    reached = 2;
  }
  for (; reached < n; ++reached) level = differentiate_samples(level, h);

  out.extended = differentiate_samples(level, h);
  for (std::size_t k = 0; k < count; ++k) out.extended[k] -= trace.u(k, agent);
  return out;
}

}  // namespace adrc::plant
