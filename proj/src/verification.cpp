#include "adrc/verification.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "adrc/engine.hpp"
#include "adrc/linalg.hpp"
#include "adrc/metrics.hpp"
#include "adrc/protocol.hpp"
#include "adrc/scenario_io.hpp"
#include "adrc/topology.hpp"

namespace adrc::harness {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

CheckResult check_topology() {
  const topology::Digraph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 1}, {1, 4}, {4, 5}});
  const auto lap = topology::decompose(g);
  bool ok = lap.w == Vector{5, 7, 6, 2, 1} && lap.mu > 0;

  std::mt19937_64 rng(1);
  int failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = std::uniform_int_distribution<int>(1, 12)(rng);
    std::vector<topology::Edge> edges;
    for (int v = 1; v <= m; ++v) edges.push_back({std::uniform_int_distribution<int>(0, v - 1)(rng), v});
    for (int e = 0; e < m; ++e) {
      const int from = std::uniform_int_distribution<int>(0, m)(rng);
      const int to = std::uniform_int_distribution<int>(1, m)(rng);
      if (from != to) edges.push_back({from, to});
    }
    const auto d = topology::decompose(topology::Digraph(m, edges));
    double residual = 0;
    const Matrix lt = d.l1.transpose();
    const Vector ones = lt * d.w;
    for (double v : ones) residual = std::max(residual, std::fabs(v - 1.0));
    bool positive = d.mu > 0;
    for (double v : d.w) positive &= v > 0;
    if (!positive || residual > 1e-10) ++failures;
  }
  ok &= failures == 0;
  return {"topology", ok, fmt("reference mu = %.10g, random-graph failures = %g", lap.mu, failures)};
}

CheckResult check_matrixkit() {
  const double mu0 = 1.0 / (2.1949 * 2.1949);
  const auto care = linalg::solve_care(2, mu0);
  const double ref[2][2] = {{2.3216, 2.1949}, {2.1949, 5.0956}};
  double gap = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gap = std::max(gap, std::fabs(care.p(i, j) - ref[i][j]));
  double worst_residual = care.residual;
  for (double m : {0.05, 0.3, 1.0, 4.0}) {
    for (int n = 1; n <= 4; ++n) worst_residual = std::max(worst_residual, linalg::solve_care(n, m).residual);
  }
  const bool routh = linalg::hurwitz_check(Vector{1, 3, 3, 1}) && !linalg::hurwitz_check(Vector{1, 1, 0, 1});
  const bool ok = gap <= 2e-3 && worst_residual <= linalg::kTolerances.care_residual && routh;
  return {"matrixkit", ok, fmt("P gap = %.3g, worst CARE residual = %.3g", gap, worst_residual)};
}

CheckResult check_saturation() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> s_dist(-20, 20);
  bool ok = true;
  for (int k = 0; k < 1000; ++k) {
    const double s = s_dist(rng);
    const double v = protocol::saturation(5, s);
    ok &= protocol::saturation(5, -s) == -v && std::fabs(v) <= 5.5;
    if (std::fabs(s) <= 5) ok &= v == s;
  }
  const double h = 1e-7;
  auto slope = [&](double s) { return (protocol::saturation(5, s + h) - protocol::saturation(5, s - h)) / (2 * h); };
  const double mismatch = std::max(std::fabs(slope(5) - 1), std::fabs(slope(6)));
  ok &= mismatch <= 1e-6;
  return {"saturation", ok, fmt("derivative mismatch at breakpoints = %.3g", mismatch)};
}

CheckResult check_eso_scaling() {
  const Scenario rig = load_scenario("builtin:eso_rig");
  const double r_values[] = {10, 20, 40};
  const auto table = sweep(rig, r_values);
  bool ok = true;
  double worst_ratio = 0;
  for (std::size_t j = 1; j < table.size(); ++j) {
    const double ratio = table[j].agents[0].tail_sup_estimation / table[j - 1].agents[0].tail_sup_estimation;
    worst_ratio = std::max(worst_ratio, ratio);
    ok &= !table[j].diverged && ratio <= 0.75;
  }
  return {"eso scaling", ok, fmt("worst e(2r)/e(r) = %.4g", worst_ratio)};
}

CheckResult check_engine() {
  Scenario s = load_scenario("builtin:smooth");
  auto final_state = [&](double dt) {
    Scenario copy = s;
    copy.sim.dt = dt;
    const Trace trace = engine::run(copy);
    const auto row = trace.row(trace.size() - 1);
    return Vector(row.begin() + 1, row.end());
  };
  const Vector a = final_state(0.04), b = final_state(0.02), c = final_state(0.01);
  double ab = 0, bc = 0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    ab = std::max(ab, std::fabs(a[q] - b[q]));
    bc = std::max(bc, std::fabs(b[q] - c[q]));
  }
  const double order = std::log2(ab / bc);
  const bool repeatable = final_state(0.02) == b;
  return {"engine convergence", order >= 3.5 && repeatable,
          fmt("observed order = %.3f, repeat identical = %g", order, repeatable ? 1.0 : 0.0)};
}

}  // namespace

std::vector<CheckResult> run_verification() {
  std::vector<CheckResult> results;
  for (auto check : {check_topology, check_matrixkit, check_saturation, check_eso_scaling, check_engine}) {
    try {
      results.push_back(check());
    } catch (const std::exception& e) {
      results.push_back({"exception", false, e.what()});
    }
  }
  return results;
}

}  // namespace adrc::harness
