#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "adrc/errors.hpp"
#include "adrc/linalg.hpp"
#include "adrc/metrics.hpp"
#include "adrc/output.hpp"
#include "adrc/protocol.hpp"
#include "adrc/scenario_io.hpp"
#include "adrc/verification.hpp"

using namespace adrc;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitVerification = 4;

void print_matrix(const char* label, const Matrix& a) {
  std::printf("%s =\n", label);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::printf("  ");
    for (std::size_t j = 0; j < a.cols(); ++j) std::printf(" %12.6g", a(i, j));
    std::printf("\n");
  }
}

void print_vector(const char* label, const Vector& v) {
  std::printf("%s =", label);
  for (double x : v) std::printf(" %.10g", x);
  std::printf("\n");
}

Scenario load_with_overrides(const std::string& path, const std::optional<double>& r) {
  Scenario s = harness::load_scenario(path);
  if (r) harness::override_r(s, *r);
  return s;
}

int cmd_design(const std::string& path) {
  const Scenario s = harness::load_scenario(path);
  const auto design = protocol::design_gains(s.graph, s.n);
  const auto& lap = design.laplacian;
  print_matrix("L1", lap.l1);
  print_vector("W", lap.w);
  std::printf("mu = %.12g\nmu0 = %.12g\n", lap.mu, lap.mu0);
  print_matrix("P", design.riccati.p);
  print_vector("K (design)", design.riccati.k);
  print_vector("K (scenario)", s.protocol.k);
  std::printf("CARE residual = %.3g after %d Newton steps\n", design.riccati.residual, design.riccati.iterations);
  Vector poly{1.0};
  poly.insert(poly.end(), s.eso.k.begin(), s.eso.k.end());
  const auto verdict = linalg::routh_hurwitz(poly);
  std::printf("observer polynomial: %s\n", verdict == linalg::RouthVerdict::Hurwitz      ? "Hurwitz"
                                           : verdict == linalg::RouthVerdict::NotHurwitz ? "not Hurwitz"
                                                                                          : "indeterminate");
  return 0;
}

void report_metrics(const harness::MetricsReport& m) {
  std::printf("r = %g\n", m.r);
  for (std::size_t i = 0; i < m.agents.size(); ++i) {
    const auto& a = m.agents[i];
    std::printf("  agent %zu: tracking %.6g  estimation %.6g  max |x| %.6g\n", i + 1, a.tail_sup_tracking,
                a.tail_sup_estimation, a.max_state_norm);
  }
  std::printf("  max stacked |x| %.6g\n", m.max_state_norm);
}

int cmd_simulate(const std::string& path, const std::optional<double>& r, const fs::path& out) {
  const Scenario s = load_with_overrides(path, r);
  const harness::RunResult run = harness::simulate(s);
  if (run.metrics.diverged) {
    std::fprintf(stderr, "diverged: %s\n", run.metrics.divergence_message.c_str());
    return kExitDivergence;
  }
  for (const auto& [key, value] : run.trace.metadata)
    if (key == "warning") std::fprintf(stderr, "warning: %s\n", value.c_str());
  fs::create_directories(out);
  harness::write_trace_csv(run.trace, out / "trace.csv");
  harness::write_trace_metadata(run.trace, out / "metadata.txt");
  const std::vector<harness::MetricsReport> reports{run.metrics};
  harness::write_metrics_csv(reports, out / "metrics.csv");
  harness::emit_run_plots(run, out, s.name);
  report_metrics(run.metrics);
  std::printf("wrote %s\n", out.string().c_str());
  return 0;
}

int cmd_sweep(const std::string& path, const std::vector<double>& r_values, const std::optional<fs::path>& out) {
  const Scenario s = harness::load_scenario(path);
  const auto table = harness::sweep(s, r_values);
  bool diverged = false;
  std::printf("%8s %6s %18s %20s %15s\n", "r", "agent", "tail_sup_tracking", "tail_sup_estimation", "max_state_norm");
  for (const auto& m : table) {
    diverged |= m.diverged;
    for (std::size_t i = 0; i < m.agents.size(); ++i) {
      const auto& a = m.agents[i];
      std::printf("%8g %6zu %18.6g %20.6g %15.6g\n", m.r, i + 1, a.tail_sup_tracking, a.tail_sup_estimation,
                  a.max_state_norm);
    }
    if (m.diverged) std::fprintf(stderr, "r = %g diverged: %s\n", m.r, m.divergence_message.c_str());
  }
  if (out) harness::write_metrics_csv(table, *out / "metrics.csv");
  return diverged ? kExitDivergence : 0;
}

int cmd_verify() {
  bool ok = true;
  for (const auto& check : harness::run_verification()) {
    std::printf("[%s] %s: %s\n", check.passed ? "PASS" : "FAIL", check.name.c_str(), check.detail.c_str());
    ok &= check.passed;
  }
  return ok ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leader-follower ADRC consensus simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::optional<double> r;
  std::vector<double> r_values;
  fs::path out = "out";
  std::optional<fs::path> sweep_out;

  auto* design = app.add_subcommand("design", "Print the Laplacian split, W, mu, P and K for a scenario");
  design->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();

  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write trace, metrics and plots");
  simulate->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  simulate->add_option("--r", r, "Override the observer tuning gain")->check(CLI::Range(1.0, 1e6));
  simulate->add_option("--out", out, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Run a scenario for several observer gains");
  sweep->add_option("scenario", scenario, "Scenario file or builtin:<name>")->required();
  sweep->add_option("--r", r_values, "Comma-separated r values")->delimiter(',')->required();
  sweep->add_option("--out", sweep_out, "Directory for metrics.csv");

  auto* verify = app.add_subcommand("verify", "Run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*design) return cmd_design(scenario);
    if (*simulate) return cmd_simulate(scenario, r, out);
    if (*sweep) return cmd_sweep(scenario, r_values, sweep_out);
    if (*verify) return cmd_verify();
  } catch (const harness::ScenarioError& e) {
    for (const auto& p : e.problems()) std::fprintf(stderr, "%s\n", p.c_str());
    return kExitValidation;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "diverged: %s\n", e.what());
    return kExitDivergence;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
