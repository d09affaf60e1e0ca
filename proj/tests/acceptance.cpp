// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "adrc/engine.hpp"
#include "adrc/linalg.hpp"
#include "adrc/metrics.hpp"
#include "adrc/plant.hpp"
#include "adrc/protocol.hpp"
#include "adrc/scenario_io.hpp"
#include "adrc/topology.hpp"

using namespace adrc;

namespace {

const std::string kScenarioDir = ADRC_SCENARIO_DIR;

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Scenario scenario_file(const char* name) { return harness::load_scenario(kScenarioDir + "/" + name); }

Outcome riccati_reproduction() {
  const auto start = std::chrono::steady_clock::now();
  const double mu0 = 1.0 / (2.1949 * 2.1949);
  const auto care = linalg::solve_care(2, mu0);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double p_ref[2][2] = {{2.3216, 2.1949}, {2.1949, 5.0956}};
  const double k_ref[2] = {-2.1949, -5.0956};
  double p_gap = 0, k_gap = 0;
  for (int i = 0; i < 2; ++i) {
    k_gap = std::max(k_gap, std::fabs(care.k[i] - k_ref[i]));
    for (int j = 0; j < 2; ++j) p_gap = std::max(p_gap, std::fabs(care.p(i, j) - p_ref[i][j]));
  }
  return {p_gap <= 2e-3 && k_gap <= 2e-3 && seconds < 1.0,
          fmt("P gap %.3g, K gap %.3g, residual %.3g, %.4f s", p_gap, k_gap, care.residual, seconds)};
}

Outcome weight_vector() {
  const topology::Digraph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 1}, {1, 4}, {4, 5}});
  const auto lap = topology::decompose(g);
  const double expected[5] = {5, 7, 6, 2, 1};
  double gap = 0;
  for (int i = 0; i < 5; ++i) gap = std::max(gap, std::fabs(lap.w[i] - expected[i]));
  return {gap <= 1e-10, fmt("W = (%g, %g, %g, %g, %g), max gap %.3g", lap.w[0], lap.w[1], lap.w[2], lap.w[3],
                            lap.w[4], gap)};
}

Outcome hurwitz_validation() {
  const bool standard_gains = linalg::hurwitz_check(Vector{1, 3, 3, 1});
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> degree_dist(1, 7);
  std::uniform_real_distribution<double> magnitude(0.1, 3.0), imag(0.0, 3.0), coin(0.0, 1.0);
  int wrong = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int degree = degree_dist(rng);
    const bool stable = trial % 2 == 0;
    // Real roots and conjugate pairs, all in the open left half plane.
    std::vector<std::vector<std::complex<double>>> groups;
    int placed = 0;
    while (placed < degree) {
      const double re = -magnitude(rng);
      if (degree - placed >= 2 && coin(rng) < 0.5) {
        const double im = imag(rng) + 0.1;
        groups.push_back({{re, im}, {re, -im}});
        placed += 2;
      } else {
        groups.push_back({{re, 0.0}});
        placed += 1;
      }
    }
    // Unstable cases mirror one group into the right half plane.
    if (!stable) {
      auto& group = groups[std::uniform_int_distribution<std::size_t>(0, groups.size() - 1)(rng)];
      for (auto& z : group) z = {-z.real(), z.imag()};
    }
    std::vector<std::complex<double>> roots;
    for (const auto& group : groups) roots.insert(roots.end(), group.begin(), group.end());
    std::vector<std::complex<double>> poly{1.0};
    for (const auto& z : roots) {
      std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
      for (std::size_t i = 0; i < poly.size(); ++i) {
        next[i] += poly[i];
        next[i + 1] -= poly[i] * z;
      }
      poly = std::move(next);
    }
    Vector coeffs;
    for (const auto& c : poly) coeffs.push_back(c.real());
    if (linalg::hurwitz_check(coeffs) != stable) ++wrong;
  }
  return {standard_gains && wrong == 0, fmt("k = (3,3,1) %s, %d of 200 random polynomials misclassified",
                                         standard_gains ? "Hurwitz" : "NOT Hurwitz", wrong)};
}

Outcome end_to_end_para1() {
  const auto start = std::chrono::steady_clock::now();
  const double r_values[] = {10, 50};
  const auto table = harness::sweep(scenario_file("s4_para1.scn"), r_values);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = !table[0].diverged && !table[1].diverged && seconds < 30.0;
  std::string detail;
  for (std::size_t i = 0; i < table[0].agents.size(); ++i) {
    const auto& low = table[0].agents[i];
    const auto& high = table[1].agents[i];
    ok &= high.tail_sup_tracking < low.tail_sup_tracking && high.tail_sup_estimation < low.tail_sup_estimation;
    detail += fmt("a%zu track %.3g->%.3g est %.3g->%.3g; ", i + 1, low.tail_sup_tracking, high.tail_sup_tracking,
                  low.tail_sup_estimation, high.tail_sup_estimation);
  }
  const double norm = std::max(table[0].max_state_norm, table[1].max_state_norm);
  ok &= norm <= 50.0;
  return {ok, detail + fmt("max |x| %.3g, %.2f s", norm, seconds)};
}

Outcome robustness_para2() {
  Scenario para1 = scenario_file("s4_para1.scn");
  Scenario para2 = scenario_file("s4_para2.scn");
  harness::override_r(para1, 50);
  harness::override_r(para2, 50);
  const auto base = harness::simulate(para1).metrics;
  const auto intense = harness::simulate(para2).metrics;
  if (intense.diverged) {
    return {false, fmt("run diverged at t = %.3f s (%s)", intense.divergence_time, intense.divergence_message.c_str())};
  }
  bool ok = intense.max_state_norm <= 50.0;
  std::string detail;
  for (std::size_t i = 0; i < base.agents.size(); ++i) {
    const double ratio = intense.agents[i].tail_sup_tracking / base.agents[i].tail_sup_tracking;
    ok &= std::isfinite(intense.agents[i].tail_sup_tracking) && ratio < 1.5;
    detail += fmt("a%zu ratio %.3g; ", i + 1, ratio);
  }
  return {ok, detail + fmt("max |x| %.3g", intense.max_state_norm)};
}

Outcome eso_scaling() {
  const auto start = std::chrono::steady_clock::now();
  const double r_values[] = {10, 20, 40};
  const auto table = harness::sweep(harness::load_scenario("builtin:eso_rig"), r_values);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool ok = seconds < 10.0;
  std::string detail;
  for (std::size_t j = 0; j < table.size(); ++j) {
    ok &= !table[j].diverged;
    detail += fmt("e(%g) = %.4g; ", table[j].r, table[j].agents[0].tail_sup_estimation);
    if (j > 0) ok &= table[j].agents[0].tail_sup_estimation <= 0.75 * table[j - 1].agents[0].tail_sup_estimation;
  }
  return {ok, detail + fmt("%.2f s", seconds)};
}

Outcome saturation_suite() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> theta_dist(0.1, 10.0), unit(-1.0, 1.0);
  bool identity = true, caps = true, odd = true;
  double mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double theta = theta_dist(rng);
    const double inside = theta * unit(rng);
    identity &= protocol::saturation(theta, inside) == inside;
    const double beyond = theta + 1 + 50 * std::fabs(unit(rng));
    caps &= protocol::saturation(theta, beyond) == theta + 0.5 && protocol::saturation(theta, -beyond) == -(theta + 0.5);
    odd &= protocol::saturation(theta, -inside * 3) == -protocol::saturation(theta, inside * 3);
    const double h = 1e-7;
    auto slope = [&](double s) {
      return (protocol::saturation(theta, s + h) - protocol::saturation(theta, s - h)) / (2 * h);
    };
    mismatch = std::max({mismatch, std::fabs(slope(theta) - 1.0), std::fabs(slope(theta + 1)),
                         std::fabs(slope(-theta) - 1.0), std::fabs(slope(-theta - 1))});
  }
  return {identity && caps && odd && mismatch <= 1e-6,
          fmt("identity %s, caps %s, odd %s, breakpoint slope mismatch %.3g", identity ? "ok" : "broken",
              caps ? "ok" : "broken", odd ? "ok" : "broken", mismatch)};
}

double oracle_gap(Scenario s, double dt) {
  s.sim.dt = dt;
  s.sim.record_stride = 1;
  const Trace trace = engine::run(s);
  double worst = 0;
  for (int i = 0; i < s.m; ++i) {
    const auto oracle = plant::total_disturbance_oracle(trace, s.followers[static_cast<std::size_t>(i)], i);
    for (std::size_t k = 1; k + 1 < trace.size(); ++k)
      worst = std::max(worst, std::fabs(oracle.second_pointwise[k] - oracle.second_differenced[k]));
  }
  return worst;
}

Outcome oracle_consistency() {
  const Scenario s = scenario_file("s4_para1.scn");
  const double a = oracle_gap(s, 1e-3), b = oracle_gap(s, 5e-4), c = oracle_gap(s, 2.5e-4);
  return {a / b >= 3.5 && b / c >= 3.5,
          fmt("sup gaps %.3g, %.3g, %.3g; ratios %.3f, %.3f", a, b, c, a / b, b / c)};
}

Vector final_state(Scenario s, double dt) {
  s.sim.dt = dt;
  const Trace trace = engine::run(s);
  const auto row = trace.row(trace.size() - 1);
  return Vector(row.begin() + 1, row.end());
}

double max_gap(const Vector& a, const Vector& b) {
  double worst = 0;
  for (std::size_t q = 0; q < a.size(); ++q) worst = std::max(worst, std::fabs(a[q] - b[q]));
  return worst;
}

Outcome determinism_and_convergence() {
  Scenario para1 = scenario_file("s4_para1.scn");
  const Trace first = engine::run(para1), second = engine::run(para1);
  bool identical = first.size() == second.size();
  for (std::size_t k = 0; identical && k < first.size(); ++k) {
    const auto a = first.row(k), b = second.row(k);
    identical = std::equal(a.begin(), a.end(), b.begin());
  }

  const Scenario smooth = harness::load_scenario("builtin:smooth");
  const Vector s1 = final_state(smooth, 0.04), s2 = final_state(smooth, 0.02), s3 = final_state(smooth, 0.01),
               s4 = final_state(smooth, 0.005);
  const double order1 = std::log2(max_gap(s1, s2) / max_gap(s2, s3));
  const double order2 = std::log2(max_gap(s2, s3) / max_gap(s3, s4));
  return {identical && order1 >= 3.5 && order2 >= 3.5,
          fmt("bit-identical %s, observed orders %.3f, %.3f", identical ? "yes" : "no", order1, order2)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"Riccati reproduction", riccati_reproduction},
      {"weight vector reproduction", weight_vector},
      {"Hurwitz validation", hurwitz_validation},
      {"end-to-end (para1) r = 10 vs r = 50", end_to_end_para1},
      {"robustness variant (para2)", robustness_para2},
      {"observer 1/r law", eso_scaling},
      {"saturation unit suite", saturation_suite},
      {"oracle consistency", oracle_consistency},
      {"determinism and convergence", determinism_and_convergence},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.passed) ++failures;
    std::printf("[%s] %d %s: %s\n", outcome.passed ? "PASS" : "FAIL", index, name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
