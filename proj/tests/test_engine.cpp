#include <cmath>

#include "adrc/engine.hpp"
#include "adrc/errors.hpp"
#include "adrc/scenario_io.hpp"
#include "doctest.h"

using namespace adrc;
using namespace adrc::engine;

namespace {

const std::string kScenarioDir = ADRC_SCENARIO_DIR;

ClosedLoopState initial_state(const Scenario& s) {
  ClosedLoopState st;
  st.x0 = s.leader.x0_init;
  for (const auto& f : s.followers) {
    st.x.push_back(f.x_init);
    st.xhat.push_back(Vector(static_cast<std::size_t>(s.n + 1), 0.0));
  }
  return st;
}

Vector final_state(Scenario s, double dt) {
  s.sim.dt = dt;
  const Trace trace = run(s);
  const auto row = trace.row(trace.size() - 1);
  return Vector(row.begin() + 1, row.end());
}

}  // namespace

TEST_CASE("rk4_step examples") {
  Vector x{1.0};
  auto decay = [](double, std::span<const double> s, std::span<double> out) { out[0] = -s[0]; };
  for (int k = 0; k < 10; ++k) rk4_step(decay, 0.1 * k, x, 0.1);
  CHECK(std::fabs(x[0] - std::exp(-1.0)) <= 1e-6);

  Vector still{0.25, -3.0};
  auto zero = [](double, std::span<const double>, std::span<double> out) { out[0] = out[1] = 0; };
  rk4_step(zero, 0, still, 0.7);
  CHECK(still == Vector{0.25, -3.0});

  Vector ramp{2.0};
  auto one = [](double, std::span<const double>, std::span<double> out) { out[0] = 1; };
  rk4_step(one, 0, ramp, 0.5);
  CHECK(ramp[0] == 2.5);

  Vector blow{1.0};
  auto bad = [](double, std::span<const double>, std::span<double> out) { out[0] = NAN; };
  CHECK_THROWS_AS(rk4_step(bad, 0, blow, 0.1), DivergenceError);
}

TEST_CASE("zero scenario stays at the origin") {
  const Scenario s = harness::load_scenario("builtin:zero");
  const Vector d = closed_loop_derivative(s, initial_state(s));
  for (double v : d) CHECK(v == 0.0);
  const Trace trace = run(s);
  CHECK(trace.size() > 2);
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const auto row = trace.row(k);
    for (std::size_t c = 1; c < row.size(); ++c) REQUIRE(row[c] == 0.0);
  }
}

TEST_CASE("single follower composes theta, saturation and observer by hand") {
  Scenario s = harness::load_scenario("builtin:eso_rig");
  ClosedLoopState st = initial_state(s);
  st.x0 = {0.0, 0.0};
  st.x[0] = {0.2, -0.1};
  st.xhat[0] = {1.5, -0.5, 7.0};
  st.t = 0.3;
  const Vector d = closed_loop_derivative(s, st);

  const auto& k = s.protocol.k;
  const double u = protocol::saturation(5, k[0] * 1.5 + k[1] * -0.5) - protocol::saturation(5, 7.0);
  const double y = 0.2;
  const double r = s.eso.r;
  // Layout: leader (2), follower (2), observer (3).
  CHECK(d[2] == doctest::Approx(-0.1));
  CHECK(d[3] == doctest::Approx(u + std::sin(0.3)));
  CHECK(d[4] == doctest::Approx(-0.5 + 3 * r * (y - 1.5)));
  CHECK(d[5] == doctest::Approx(7.0 + u + 3 * r * r * (y - 1.5)));
  CHECK(d[6] == doctest::Approx(r * r * r * (y - 1.5)));
}

TEST_CASE("golden derivative of the five-agent scenario at t = 0") {
  const Scenario s = harness::load_scenario(kScenarioDir + "/s4_para1.scn");
  const Vector d = closed_loop_derivative(s, initial_state(s));
  const Vector golden{0.2, 0.29156189371478813, -0.037206913040668699, 1.9067915978687981, 0.67148718114569572,
                      0.26060090090067545, -0.225, 0.36025421927520485, -0.225, 0.36025421927520485, 0.9256,
                      -0.053521236018810314, 33, 331.67759, 1100, 36, 360, 1200, 15, 150, 500, 15, 150, 500,
                      -24, -240, -800};
  REQUIRE(d.size() == golden.size());
  for (std::size_t q = 0; q < d.size(); ++q) {
    CAPTURE(q);
    CHECK(d[q] == doctest::Approx(golden[q]).epsilon(1e-13));
  }
}

TEST_CASE("runs are bit-identical") {
  Scenario s = harness::load_scenario(kScenarioDir + "/s4_para1.scn");
  s.sim.t_final = 2.0;
  const Trace a = run(s), b = run(s);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto ra = a.row(k), rb = b.row(k);
    REQUIRE(std::equal(ra.begin(), ra.end(), rb.begin()));
  }
}

TEST_CASE("step halving shows fourth-order convergence on the smooth scenario") {
  const Scenario s = harness::load_scenario("builtin:smooth");
  const Vector a = final_state(s, 0.04), b = final_state(s, 0.02), c = final_state(s, 0.01);
  double ab = 0, bc = 0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    ab = std::max(ab, std::fabs(a[q] - b[q]));
    bc = std::max(bc, std::fabs(b[q] - c[q]));
  }
  CHECK(std::log2(ab / bc) >= 3.5);
}

TEST_CASE("trace records inputs and metadata") {
  Scenario s = harness::load_scenario(kScenarioDir + "/s4_para1.scn");
  s.sim.t_final = 0.5;
  s.sim.record_stride = 10;
  const Trace trace = run(s);
  CHECK(trace.size() == 51);
  CHECK(trace.spacing() == doctest::Approx(0.01));
  CHECK(trace.time(50) == doctest::Approx(0.5));
  CHECK(trace.u(0, 0) == doctest::Approx(1.67759));
  CHECK(trace.y(0, 0) == doctest::Approx(1.1));
  bool has_r = false;
  for (const auto& [key, value] : trace.metadata) has_r |= key == "r";
  CHECK(has_r);
}

TEST_CASE("step size guards") {
  CHECK(effective_step(SimConfig{1e-3, 1, 1}, 100) == 1e-3);
  CHECK(effective_step(SimConfig{1e-3, 1, 1}, 400) == doctest::Approx(0.25 / 400));
  CHECK(step_too_large(0.06, 10));
  CHECK_FALSE(step_too_large(1e-3, 50));
}

TEST_CASE("the five-agent scenarios stay bounded") {
  for (const char* name : {"s4_para1.scn", "s4_theory.scn"}) {
    const Scenario s = harness::load_scenario(kScenarioDir + "/" + name);
    const Trace trace = run(s);
    double worst = 0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
      double sq = 0;
      for (int i = 0; i < s.m; ++i)
        for (int q = 0; q < s.n; ++q) sq += trace.x(k, i, q) * trace.x(k, i, q);
      worst = std::max(worst, std::sqrt(sq));
    }
    CAPTURE(name);
    CHECK(worst <= 50);
  }
}
