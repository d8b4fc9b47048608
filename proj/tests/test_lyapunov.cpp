#include <doctest.h>

#include <cmath>
#include <vector>

#include "prodnet/lyapunov.hpp"

using namespace prodnet;

namespace {

Config make_config(int m, double v, double l, double h, double tau) {
  NetworkSpec net;
  net.m = m;
  net.velocity.assign(m, v);
  net.capacity.assign(m, 0.0);
  for (int e = 0; e < m; ++e) net.capacity[e] = 10.0 - e;
  net.length = l;
  return Config::validated(net, GridSpec::from_resolution(l, h, tau, tau));
}

}  // namespace

TEST_CASE("energy of the zero state vanishes") {
  Config cfg = make_config(2, 1.0, 0.5, 0.25, 0.25);
  auto s = discrete_V(SimState::zero(cfg), LyapunovWeights::uniform(2, 1, 0.5, 1, 0.5),
                      cfg, 0.0);
  CHECK(s.V == 0.0);
  CHECK(s.V1 == 0.0);
  CHECK(s.V2 == 0.0);
}

TEST_CASE("unweighted energy reduces to the squared discrete norm") {
  Config cfg = make_config(1, 1.0, 1.0, 1.0, 1.0);
  SimState s = SimState::constant(cfg, {1.0}, {0.0});
  auto sample = discrete_V(s, LyapunovWeights::uniform(1, 1, 0.0, 1, 0.0), cfg, 0.0);
  CHECK(sample.V == doctest::Approx(1.0));
}

TEST_CASE("hand-evaluated weighted flux energy") {
  Config cfg = make_config(1, 1.0, 0.5, 0.25, 0.25);
  SimState s = SimState::constant(cfg, {2.0}, {0.0});
  auto sample = discrete_V(s, LyapunovWeights::uniform(1, 1, 2.0, 1, 1.0), cfg, 0.0);
  CHECK(sample.V1 == doctest::Approx(4.0 * 0.25 * (std::exp(-0.25) + std::exp(-0.75))));
  CHECK(sample.V1 == doctest::Approx(1.2513).epsilon(1e-4));
  CHECK(sample.V2 == 0.0);
}

TEST_CASE("summation order changes the energy only at round-off") {
  Config cfg = make_config(2, 1.0, 0.5, 0.025, 0.025);
  SimState s = SimState::zero(cfg);
  for (int e = 0; e < 2; ++e) {
    for (int j = 0; j < cfg.grid.cells; ++j) s.flux[e][j] = 0.3 * (j + 1) + e;
  }
  LyapunovWeights w = LyapunovWeights::uniform(2, 1, 0.5, 1, 0.5);
  const double forward = discrete_V(s, w, cfg, 0.0).V;
  double reversed = 0.0;
  for (int e = 2; e >= 1; --e) {
    for (int j = cfg.grid.cells - 1; j >= 0; --j) {
      const double f = s.flux[e - 1][j];
      reversed += f * f * std::exp(-0.5 * cell_center(e, j, cfg.net, cfg.grid)) * cfg.grid.h;
    }
  }
  CHECK(forward == doctest::Approx(reversed).epsilon(1e-12));
}

TEST_CASE("discrete decay rate reproduces the tabulated values") {
  LyapunovWeights w = LyapunovWeights::uniform(2, 1, 0.575, 1, 0.575);

  SUBCASE("coarse grid, unit speed") {
    Config cfg = make_config(2, 1.0, 0.5, 0.05, 0.05);
    CHECK(decay_rate(cfg, w).nu == doctest::Approx(0.5668).epsilon(1e-4));
  }
  SUBCASE("coarse grid, half speed at CFL equality") {
    Config cfg = make_config(2, 0.5, 0.5, 0.05, 0.1);
    CHECK(decay_rate(cfg, w).nu == doctest::Approx(0.2834).epsilon(1e-4));
  }
  SUBCASE("fine grid approaches the analytic rate") {
    Config cfg = make_config(2, 1.0, 0.5, 0.00125, 0.00125);
    CHECK(decay_rate(cfg, w).nu == doctest::Approx(0.5748).epsilon(1e-4));
    // gain-sweep weights: the rate is pinned by eta_tilde = 0.5752
    LyapunovWeights ws = LyapunovWeights::uniform(2, 1, -2.0 * std::log(0.1), 1, 0.5752);
    CHECK(decay_rate(cfg, ws).nu == doctest::Approx(0.5750).epsilon(1e-4));
  }
}

TEST_CASE("decay rate validates its weights") {
  Config cfg = make_config(2, 1.0, 0.5, 0.05, 0.05);
  CHECK_THROWS_AS(decay_rate(cfg, LyapunovWeights::uniform(2, 1, 0.0, 1, 0.5)),
                  ValidationError);
}

TEST_CASE("tau times nu stays in (0,1] on valid configs") {
  for (double eta : {0.1, 0.575, 2.0, 10.0}) {
    Config cfg = make_config(2, 1.0, 0.5, 0.05, 0.05);
    LyapunovWeights w = LyapunovWeights::uniform(2, 1, eta, 1, eta);
    const double tn = cfg.grid.tau * decay_rate(cfg, w).nu;
    CHECK(tn > 0.0);
    CHECK(tn <= 1.0);
  }
}

TEST_CASE("analytic decay rate") {
  NetworkSpec net;
  net.m = 2;
  net.velocity = {1.0, 1.0};
  net.capacity = {6.0, 4.0};
  net.length = 0.5;
  CHECK(analytic_decay_rate(LyapunovWeights::uniform(2, 1, 0.1, 1, 0.1), net) ==
        doctest::Approx(0.1));
  CHECK(analytic_decay_rate(LyapunovWeights::uniform(2, 1, 0.575, 1, 0.575), net) ==
        doctest::Approx(0.575));
  net.velocity = {1.0, 0.5};
  CHECK(analytic_decay_rate(LyapunovWeights::uniform(2, 1, 0.5, 1, 0.2), net) ==
        doctest::Approx(0.1));
}

TEST_CASE("exponential upper bound") {
  CHECK(upper_bound(3.0, 0.5, 0.1, 0) == doctest::Approx(3.0));
  CHECK(upper_bound(2.0, 0.5, 0.1, 10) == doctest::Approx(2.0 * std::exp(-0.5)));
  CHECK(upper_bound(2.0, 0.5, 0.1, 10) == doctest::Approx(1.2131).epsilon(1e-4));
}

TEST_CASE("discrete product norm") {
  Config cfg = make_config(2, 1.0, 0.25, 0.25, 0.25);
  SimState s = SimState::zero(cfg);
  CHECK(discrete_norm(s, cfg.grid.h) == 0.0);
  s.flux[0][0] = 2.0;
  s.queue[1] = 1.0;
  CHECK(discrete_norm(s, 0.25) == doctest::Approx(std::sqrt(2.0)));
  for (auto& row : s.flux) {
    for (double& f : row) f *= 3.0;
  }
  for (double& q : s.queue) q *= 3.0;
  CHECK(discrete_norm(s, 0.25) == doctest::Approx(3.0 * std::sqrt(2.0)));
}

TEST_CASE("residual of the resting system passes") {
  Config cfg = make_config(2, 1.0, 0.5, 0.25, 0.25);
  SimState s = SimState::zero(cfg);
  StepDiagnostics diag = prepare_step(s, 0.0, cfg);
  auto r = stability_residual(s, diag, LyapunovWeights::uniform(2, 1, 0.5, 1, 0.5),
                              cfg, 0.0);
  CHECK(r.S2 == 0.0);
  CHECK(r.Z2 == 0.0);
  CHECK(r.pass);
  CHECK(r.C_lower > 0.0);
  CHECK(r.C_lower <= r.C_upper);
}

TEST_CASE("vanishing weights collapse the energy onto the norm") {
  Config cfg = make_config(2, 1.0, 0.5, 0.05, 0.05);
  SimState s = SimState::constant(cfg, {3.0, 2.0}, {0.0, 0.7});
  LyapunovWeights w = LyapunovWeights::uniform(2, 1, 1e-14, 1, 1e-14);
  const double V = discrete_V(s, w, cfg, 1.0).V;
  const double n = discrete_norm(s, cfg.grid.h);
  CHECK(V == doctest::Approx(n * n).epsilon(1e-9));
}

TEST_CASE("decay-rate refinement approaches the analytic value at first order") {
  NetworkSpec net;
  net.m = 2;
  net.capacity = {6.0, 4.0};
  net.length = 0.5;
  LyapunovWeights w = LyapunovWeights::uniform(2, 1, 0.575, 1, 0.575);
  const std::vector<double> h_list = {0.05, 0.01, 0.005, 0.0025, 0.00125, 0.000625};

  SUBCASE("tabulated rates at unit speed") {
    net.velocity = {1.0, 1.0};
    auto rows = decay_convergence(w, net, h_list);
    const std::vector<double> expect = {0.5668, 0.5734, 0.5742, 0.5746, 0.5748, 0.5749};
    REQUIRE(rows.size() == expect.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].nu == doctest::Approx(expect[i]).epsilon(1e-4));
    }
  }
  SUBCASE("tabulated rates at half speed") {
    net.velocity = {0.5, 0.5};
    auto rows = decay_convergence(w, net, h_list);
    const std::vector<double> expect = {0.2834, 0.2867, 0.2871, 0.2873, 0.2874, 0.2874};
    REQUIRE(rows.size() == expect.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].nu == doctest::Approx(expect[i]).epsilon(1e-3));
    }
  }
  SUBCASE("halving the step halves the error") {
    net.velocity = {1.0, 1.0};
    std::vector<double> halving = {0.05, 0.025, 0.0125, 0.00625, 0.003125};
    auto rows = decay_convergence(w, net, halving);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].ratio > 0.4);
      CHECK(rows[i].ratio < 0.6);
      CHECK(rows[i].error < rows[i - 1].error);
    }
  }
}
