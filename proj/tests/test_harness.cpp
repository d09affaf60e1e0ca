#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "adrc/builtin_scenarios.hpp"
#include "adrc/metrics.hpp"
#include "adrc/output.hpp"
#include "adrc/scenario_io.hpp"
#include "doctest.h"

using namespace adrc;
using namespace adrc::harness;

namespace {

const std::string kScenarioDir = ADRC_SCENARIO_DIR;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("adrc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

bool mentions(const ScenarioError& e, const std::string& needle) {
  for (const auto& p : e.problems())
    if (p.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("shipped five-agent scenario loads") {
  const Scenario s = load_scenario(kScenarioDir + "/s4_para1.scn");
  CHECK(s.n == 2);
  CHECK(s.m == 5);
  CHECK(s.eso.k == Vector{3, 3, 1});
  CHECK(s.eso.r == 10);
  CHECK(s.followers[0].x_init == Vector{0.1, -0.4});
  CHECK(s.followers[4].x_init == Vector{-0.8, 0.7});
  CHECK(s.leader.x0_init == Vector{0.3, 0.2});
  CHECK(s.protocol.k == Vector{-2.1949, -5.0956});
  CHECK_FALSE(s.protocol.leader_feedforward);
  CHECK(load_scenario(kScenarioDir + "/s4_theory.scn").protocol.leader_feedforward);
  CHECK(validate(s).empty());
}

TEST_CASE("every built-in scenario parses") {
  for (auto name : builtin_scenario_names()) {
    CAPTURE(name);
    CHECK_NOTHROW(load_scenario("builtin:" + std::string(name)));
  }
  CHECK_THROWS_AS(load_scenario("builtin:nope"), ScenarioError);
  CHECK_THROWS_AS(load_scenario(kScenarioDir + "/does_not_exist.scn"), ValidationError);
}

TEST_CASE("scenario errors name the problem") {
  const std::string text = std::string(*builtin_scenario("eso_rig"));

  const std::string no_topology = replace_once(text, "[topology]\n0 -> 1\n", "");
  try {
    parse_scenario(no_topology, "rig");
    FAIL("expected an error");
  } catch (const ScenarioError& e) {
    CHECK(mentions(e, "topology"));
  }

  try {
    parse_scenario(replace_once(text, "k = 3, 3, 1", "k = 1, 0, 1"), "rig");
    FAIL("expected an error");
  } catch (const ScenarioError& e) {
    CHECK(mentions(e, "Hurwitz"));
  }

  try {
    parse_scenario(replace_once(text, "0 -> 1", "1 -> 1"), "rig");
    FAIL("expected an error");
  } catch (const ScenarioError& e) {
    CHECK(mentions(e, "rig:"));
  }

  try {
    parse_scenario(replace_once(text, "[sim]", "[sim]\nbogus = 1"), "rig");
    FAIL("expected an error");
  } catch (const ScenarioError& e) {
    CHECK(mentions(e, "bogus"));
  }
}

TEST_CASE("scenario round trip") {
  for (const char* name : {"s4_para1.scn", "s4_para2.scn", "s4_theory.scn"}) {
    const Scenario a = load_scenario(kScenarioDir + "/" + name);
    const Scenario b = parse_scenario(serialize_scenario(a), "round trip");
    CAPTURE(name);
    CHECK(equivalent(a, b));
  }
  for (auto name : builtin_scenario_names()) {
    const Scenario a = load_scenario("builtin:" + std::string(name));
    CHECK(equivalent(a, parse_scenario(serialize_scenario(a), "round trip")));
  }
  Scenario changed = load_scenario(kScenarioDir + "/s4_para1.scn");
  const Scenario original = changed;
  override_r(changed, 50);
  CHECK_FALSE(equivalent(original, changed));
  CHECK(changed.overrides.back() == "r=50");
}

TEST_CASE("zero scenario gives zero metrics and zero CSV data") {
  const RunResult run = simulate(load_scenario("builtin:zero"));
  CHECK_FALSE(run.metrics.diverged);
  CHECK(run.metrics.max_state_norm == 0);
  for (const auto& a : run.metrics.agents) {
    CHECK(a.tail_sup_tracking == 0);
    CHECK(a.tail_sup_estimation == 0);
    CHECK(a.max_state_norm == 0);
  }

  const auto dir = scratch_dir("zero");
  write_trace_csv(run.trace, dir / "trace.csv");
  std::istringstream csv(read_file(dir / "trace.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "t,x0_1,x0_2,x1_1,x1_2,xh1_1,xh1_2,xh1_3,u1,y1,x2_1,x2_2,xh2_1,xh2_2,xh2_3,u2,y2");
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    REQUIRE(cells.size() == 1 + 2 + 2 * (2 * 2 + 3));
    for (std::size_t c = 1; c < cells.size(); ++c) REQUIRE(cells[c] == "0");
  }
  CHECK(rows == run.trace.size());
}

TEST_CASE("metrics csv and metadata") {
  Scenario s = load_scenario("builtin:smooth");
  const RunResult run = simulate(s);
  const auto dir = scratch_dir("metrics");
  const std::vector<MetricsReport> reports{run.metrics};
  write_metrics_csv(reports, dir / "metrics.csv");
  const std::string text = read_file(dir / "metrics.csv");
  CHECK(text.starts_with("r,agent,tail_sup_tracking,tail_sup_estimation,max_state_norm\n5,1,"));
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);

  write_trace_metadata(run.trace, dir / "metadata.txt");
  const std::string meta = read_file(dir / "metadata.txt");
  CHECK(meta.find("scenario: smooth") != std::string::npos);
  CHECK(meta.find("r: 5") != std::string::npos);
}

TEST_CASE("a single-point sweep matches compute_metrics of the run") {
  const Scenario s = load_scenario("builtin:eso_rig");
  const double r_values[] = {10.0};
  const auto table = sweep(s, r_values);
  REQUIRE(table.size() == 1);
  const RunResult run = simulate(s);
  CHECK(table[0].r == 10);
  CHECK(table[0].agents[0].tail_sup_tracking == run.metrics.agents[0].tail_sup_tracking);
  CHECK(table[0].agents[0].tail_sup_estimation == run.metrics.agents[0].tail_sup_estimation);
  CHECK(table[0].max_state_norm == run.metrics.max_state_norm);

  CHECK_THROWS_AS(sweep(s, std::span<const double>{}), ValidationError);
  const double bad[] = {0.5};
  CHECK_THROWS_AS(sweep(s, bad), ValidationError);
}

TEST_CASE("rig sweep: estimation error decreases with r") {
  const double r_values[] = {10, 20, 40, 80};
  const auto table = sweep(load_scenario("builtin:eso_rig"), r_values);
  for (std::size_t j = 1; j < table.size(); ++j) {
    CAPTURE(j);
    CHECK(table[j].agents[0].tail_sup_estimation < table[j - 1].agents[0].tail_sup_estimation);
  }
}

TEST_CASE("five-agent sweep: larger r tracks better, exponential agents estimate worse") {
  const double r_values[] = {10, 50};
  const auto table = sweep(load_scenario(kScenarioDir + "/s4_para1.scn"), r_values);
  REQUIRE(table.size() == 2);
  for (std::size_t i = 0; i < 5; ++i) {
    CAPTURE(i);
    CHECK_FALSE(table[0].diverged);
    CHECK(table[1].agents[i].tail_sup_tracking < table[0].agents[i].tail_sup_tracking);
    CHECK(std::isfinite(table[1].agents[i].tail_sup_estimation));
  }
  for (const auto& report : table) {
    for (std::size_t fast : {0u, 1u})
      for (std::size_t slow : {2u, 3u, 4u})
        CHECK(report.agents[fast].tail_sup_estimation >= report.agents[slow].tail_sup_estimation);
  }
}

TEST_CASE("divergence is reported, not thrown") {
  std::string text = std::string(*builtin_scenario("eso_rig"));
  text = replace_once(text, "h2 = \"d\"", "h2 = \"x2^3 + d\"");
  text = replace_once(text, "init = 0.2, -0.1", "init = 0.2, 3");
  const RunResult run = simulate(parse_scenario(text, "unstable"));
  CHECK(run.metrics.diverged);
  CHECK(run.metrics.divergence_time > 0);
  CHECK(std::isinf(run.metrics.max_state_norm));
}

TEST_CASE("run plots are written as SVG") {
  Scenario s = load_scenario(kScenarioDir + "/s4_para1.scn");
  s.sim.t_final = 2;
  const RunResult run = simulate(s);
  const auto dir = scratch_dir("plots");
  const auto written = emit_run_plots(run, dir, "para1");
  REQUIRE(written.size() == 3);
  for (const auto& path : written) {
    const std::string svg = read_file(path);
    CHECK(svg.starts_with("<svg"));
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 10);
    CHECK(svg.find("polyline") != std::string::npos);
  }
  CHECK(written[0].filename() == "para1_tracking.svg");
}
