#include <doctest.h>

#include <limits>
#include <vector>

#include "prodnet/discretization.hpp"

using namespace prodnet;

namespace {

Config small_config(double tau = 0.25, double T = 0.25) {
  NetworkSpec net;
  net.m = 2;
  net.velocity = {1.0, 1.0};
  net.capacity = {6.0, 4.0};
  net.length = 0.5;
  GridSpec grid = GridSpec::from_resolution(0.5, 0.25, tau, T);
  return Config::validated(net, grid);
}

}  // namespace

TEST_CASE("queue coupling selects the branch by queue state") {
  Config cfg = small_config();
  SimState s = SimState::constant(cfg, {3.0, 0.0}, {0.0, 0.0});

  SUBCASE("empty queue passes the upstream outflow through") {
    CHECK(coupling_outflow(s, 2, cfg.net) == doctest::Approx(3.0));
  }
  SUBCASE("loaded queue feeds at capacity") {
    s.queue[1] = 0.5;
    CHECK(coupling_outflow(s, 2, cfg.net) == doctest::Approx(4.0));
  }
  SUBCASE("smoothed coupling caps at capacity for well-filled queues") {
    s.queue[1] = 0.5;
    CHECK(coupling_outflow(s, 2, cfg.net, {CouplingKind::Smoothed, 0.01}) ==
          doctest::Approx(4.0));
  }
  SUBCASE("smoothed coupling drains slowly near empty") {
    s.queue[1] = 1e-8;
    CHECK(coupling_outflow(s, 2, cfg.net, {CouplingKind::Smoothed, 1e-6}) ==
          doctest::Approx(0.01));
  }
  SUBCASE("processor 1 has no upstream queue") {
    CHECK_THROWS_AS(coupling_outflow(s, 1, cfg.net), IndexOutOfRange);
  }
}

TEST_CASE("upwind update is an exact shift at CFL ratio 1") {
  Config cfg = small_config();
  SimState s = SimState::zero(cfg);
  s.flux[0] = {1.0, 2.0};
  s.ghost[0] = 7.0;
  upwind_step(s, cfg);
  CHECK(s.flux[0][0] == doctest::Approx(7.0));
  CHECK(s.flux[0][1] == doctest::Approx(1.0));
  CHECK(s.ghost[0] == doctest::Approx(7.0));
}

TEST_CASE("upwind update at CFL ratio one half") {
  Config cfg = small_config(0.125, 0.125);
  SimState s = SimState::zero(cfg);
  s.flux[0] = {2.0, 4.0};
  s.ghost[0] = 0.0;
  upwind_step(s, cfg);
  CHECK(s.flux[0][0] == doctest::Approx(1.0));
  CHECK(s.flux[0][1] == doctest::Approx(3.0));
}

TEST_CASE("constant profile with matching ghost is a fixed point") {
  Config cfg = small_config(0.125, 0.125);
  SimState s = SimState::constant(cfg, {5.0, 5.0}, {0.0, 0.0});
  s.ghost = {5.0, 5.0};
  upwind_step(s, cfg);
  for (int e = 0; e < 2; ++e) {
    for (double f : s.flux[e]) CHECK(f == doctest::Approx(5.0));
  }
}

TEST_CASE("queue Euler step with clamping") {
  std::vector<int> clamps;

  SUBCASE("balanced fluxes leave the queue unchanged") {
    auto q = queue_step({0.0, 1.0}, {0.0, 4.0}, {0.0, 4.0}, 0.01, &clamps);
    CHECK(q[1] == doctest::Approx(1.0));
    CHECK(clamps.empty());
  }
  SUBCASE("surplus inflow accumulates") {
    auto q = queue_step({0.0, 0.0}, {0.0, 6.0}, {0.0, 4.0}, 0.01, &clamps);
    CHECK(q[1] == doctest::Approx(0.02));
    CHECK(clamps.empty());
  }
  SUBCASE("overdraw clamps at zero and is recorded") {
    auto q = queue_step({0.0, 0.001}, {0.0, 0.0}, {0.0, 4.0}, 0.01, &clamps);
    CHECK(q[1] == 0.0);
    REQUIRE(clamps.size() == 1);
    CHECK(clamps[0] == 2);
  }
}

TEST_CASE("zero state is a fixed point of the full step") {
  Config cfg = small_config();
  SimState s = SimState::zero(cfg);
  SimState next = step(s, 0.0, cfg);
  for (int e = 0; e < 2; ++e) {
    for (double f : next.flux[e]) CHECK(f == 0.0);
    CHECK(next.queue[e] == 0.0);
  }
  CHECK(next.k == 1);
}

TEST_CASE("loaded queue feeds capacity while the balance holds it constant") {
  Config cfg = small_config();
  SimState s = SimState::constant(cfg, {4.0, 4.0}, {0.0, 1.0});
  StepDiagnostics diag;
  SimState next = step(s, 0.0, cfg, {}, &diag);
  CHECK(diag.g_out[1] == doctest::Approx(4.0));
  CHECK(diag.g_in[1] == doctest::Approx(4.0));
  // processor 1 shifts in the zero control, processor 2 shifts in capacity
  CHECK(next.flux[0][0] == doctest::Approx(0.0));
  CHECK(next.flux[0][1] == doctest::Approx(4.0));
  CHECK(next.flux[1][0] == doctest::Approx(4.0));
  CHECK(next.flux[1][1] == doctest::Approx(4.0));
  CHECK(next.queue[1] == doctest::Approx(1.0));
}

TEST_CASE("inflow above downstream capacity grows the queue") {
  Config cfg = small_config();
  SimState s = SimState::constant(cfg, {6.0, 4.0}, {0.0, 0.0});
  SimState next = step(s, 6.0, cfg);
  CHECK(next.queue[1] == doctest::Approx(cfg.grid.tau * 2.0));
}

TEST_CASE("control is clamped to the first capacity and recorded") {
  Config cfg = small_config();
  SimState s = SimState::zero(cfg);
  StepDiagnostics diag;
  step(s, 9.0, cfg, {}, &diag);
  CHECK(diag.applied_control == doctest::Approx(6.0));
  CHECK(diag.control_clamped);
  step(s, -1.0, cfg, {}, &diag);
  CHECK(diag.applied_control == 0.0);
}

TEST_CASE("simulate visits every step once and is deterministic") {
  Config cfg = small_config(0.25, 1.0);
  SimState init = SimState::constant(cfg, {4.0, 2.0}, {0.0, 0.5});
  auto policy = [](int, double, const SimState& s) { return 0.5 * s.outflow(2); };

  std::vector<SimState> first, second;
  auto record = [](std::vector<SimState>& out) {
    return [&out](int, double, const SimState& s, const StepDiagnostics&) {
      out.push_back(s);
    };
  };
  simulate(cfg, init, policy, record(first));
  simulate(cfg, init, policy, record(second));

  REQUIRE(first.size() == static_cast<std::size_t>(cfg.grid.steps));
  REQUIRE(second.size() == first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].k == static_cast<int>(i));
    for (int e = 0; e < 2; ++e) {
      CHECK(first[i].queue[e] == second[i].queue[e]);
      CHECK(first[i].ghost[e] == second[i].ghost[e]);
      for (int j = 0; j < cfg.grid.cells; ++j) {
        CHECK(first[i].flux[e][j] == second[i].flux[e][j]);
      }
    }
  }
}

TEST_CASE("simulate aborts on non-finite data with the location") {
  Config cfg = small_config(0.25, 1.0);
  SimState init = SimState::constant(cfg, {1.0, 1.0}, {0.0, 0.0});
  init.flux[1][1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(
      simulate(cfg, init, [](int, double, const SimState&) { return 0.0; }),
      NonFiniteState);
}

TEST_CASE("initial state construction rejects bad queues") {
  Config cfg = small_config();
  CHECK_THROWS_AS(SimState::constant(cfg, {1.0, 1.0}, {0.5, 0.0}), ValidationError);
  CHECK_THROWS_AS(SimState::constant(cfg, {1.0, 1.0}, {0.0, -0.5}), ValidationError);
}
