#include <doctest.h>

#include <cmath>
#include <vector>

#include "prodnet/feedback.hpp"

using namespace prodnet;

namespace {

Config two_proc(double l = 0.5, double h = 0.25, double tau = 0.25, double T = 0.25) {
  NetworkSpec net;
  net.m = 2;
  net.velocity = {1.0, 1.0};
  net.capacity = {6.0, 4.0};
  net.length = l;
  return Config::validated(net, GridSpec::from_resolution(l, h, tau, T));
}

LyapunovWeights uniform_w(double eta, double eta_tilde, int m = 2) {
  return LyapunovWeights::uniform(m, 1.0, eta, 1.0, eta_tilde);
}

}  // namespace

TEST_CASE("gain bound exp(-eta l)") {
  CHECK(kappa_bound(0.5, 0.5) == doctest::Approx(0.7788).epsilon(1e-4));
  CHECK(kappa_bound(0.2, 0.5) == doctest::Approx(0.9048).epsilon(1e-4));
  CHECK(kappa_bound(0.0, 0.5) == 1.0);
  CHECK_THROWS_AS(kappa_bound(0.5, 0.0), ValidationError);
}

TEST_CASE("linear feedback is the gain times the last outflow") {
  CHECK(linear_control(0.5, 4.0) == doctest::Approx(2.0));
  CHECK(linear_control(0.7788, 0.0) == 0.0);
  CHECK(linear_control(kappa_bound(0.2, 0.5), 4.0) == doctest::Approx(3.6193).epsilon(1e-4));
}

TEST_CASE("admissible squared control in the loaded-queue regime") {
  Config cfg = two_proc();
  LyapunovWeights w = uniform_w(0.5, 0.5);

  SUBCASE("balanced outflow leaves only the boundary energy") {
    // cross and quadratic queue terms vanish since f_{1,N-1} = mu_2
    SimState s = SimState::constant(cfg, {4.0, 4.0}, {0.0, 1.0});
    CHECK(mixed_bound_Y(s, w, cfg, 0.0) == doctest::Approx(16.0 * std::exp(-0.5)));
    CHECK(mixed_bound_Y(s, w, cfg, 0.0) == doctest::Approx(9.7045).epsilon(1e-4));
  }
  SUBCASE("zero flux with a loaded queue gives a negative bound") {
    SimState s = SimState::constant(cfg, {0.0, 0.0}, {0.0, 1.0});
    CHECK(mixed_bound_Y(s, w, cfg, 0.0) < 0.0);
  }
}

TEST_CASE("mixed feedback switches between regimes") {
  Config cfg = two_proc();
  LyapunovWeights w = uniform_w(0.5, 0.5);
  MixedLaw law{kappa_bound(0.5, 0.5)};

  SUBCASE("empty queues use the linear branch") {
    SimState s = SimState::constant(cfg, {4.0, 4.0}, {0.0, 0.0});
    CHECK(mixed_control(s, law, w, cfg, 0.0) == doctest::Approx(3.1152).epsilon(1e-4));
    CHECK(mixed_control(s, law, w, cfg, 0.0) ==
          doctest::Approx(linear_control(law.kappa, 4.0)));
  }
  SUBCASE("loaded queue takes the square root of the bound") {
    SimState s = SimState::constant(cfg, {4.0, 4.0}, {0.0, 1.0});
    CHECK(mixed_control(s, law, w, cfg, 0.0) ==
          doctest::Approx(std::sqrt(16.0 * std::exp(-0.5))));
    CHECK(mixed_control(s, law, w, cfg, 0.0) == doctest::Approx(3.1152).epsilon(1e-4));
  }
  SUBCASE("negative bound forces zero inflow") {
    SimState s = SimState::constant(cfg, {0.0, 0.0}, {0.0, 1.0});
    CHECK(mixed_control(s, law, w, cfg, 0.0) == 0.0);
  }
  SUBCASE("result is clamped to the first capacity") {
    SimState s = SimState::constant(cfg, {6.0, 6.0}, {0.0, 3.0});
    const double u = mixed_control(s, law, w, cfg, 0.0);
    CHECK(u >= 0.0);
    CHECK(u <= cfg.net.capacity[0]);
  }
}

TEST_CASE("mixed bound rejects states outside its derivation regime") {
  Config cfg = two_proc();
  SimState s = SimState::constant(cfg, {4.0, 4.0}, {0.0, 1.0});

  LyapunovWeights skew = uniform_w(0.5, 0.5);
  skew.eta[1] = 0.6;
  CHECK_THROWS_AS(mixed_bound_Y(s, skew, cfg, 0.0), AssumptionViolated);

  LyapunovWeights scaled = uniform_w(0.5, 0.5);
  scaled.p = {2.0, 2.0};
  CHECK_THROWS_AS(mixed_bound_Y(s, scaled, cfg, 0.0), AssumptionViolated);
}

TEST_CASE("continuous admissible bound") {
  NetworkSpec net;
  net.m = 2;
  net.velocity = {1.0, 1.0};
  net.capacity = {6.0, 4.0};
  net.length = 1.0;

  SUBCASE("vanishes at the origin") {
    CHECK(continuous_bound_X({0.0, 0.0}, {0.0, 0.0}, net, 0.5, 0.5, 1e-6, 0.0) == 0.0);
  }
  SUBCASE("hand-evaluated loaded case") {
    const double X = continuous_bound_X({4.0, 4.0}, {0.0, 1.0}, net, 0.5, 0.5, 1e-6, 0.0);
    CHECK(X == doctest::Approx(32.0 * std::exp(-0.5) - 16.0));
    CHECK(X == doctest::Approx(3.4088).epsilon(1e-4));
  }
  SUBCASE("mismatched velocities are rejected") {
    net.velocity = {1.0, 0.5};
    CHECK_THROWS_AS(continuous_bound_X({4.0, 4.0}, {0.0, 1.0}, net, 0.5, 0.5, 1e-6, 0.0),
                    AssumptionViolated);
  }
}

TEST_CASE("discrete bound approaches the continuous one as tau shrinks") {
  // eta near zero makes both coordinate conventions coincide
  Config cfg = two_proc(0.5, 0.5, 1e-6, 1e-6);
  LyapunovWeights w = uniform_w(1e-12, 0.5);
  SimState s = SimState::constant(cfg, {3.0, 2.0}, {0.0, 1.0});
  const double Y = mixed_bound_Y(s, w, cfg, 0.0);
  const double X =
      continuous_bound_X({3.0, 2.0}, {0.0, 1.0}, cfg.net, 1e-12, 0.5, 1e-6, 0.0);
  CHECK(Y == doctest::Approx(X).epsilon(1e-4));
}

TEST_CASE("boundary quadratic form eigenvalues for the 2-processor loop") {
  Config cfg = two_proc();
  LyapunovWeights w = uniform_w(0.5, 0.5);

  SUBCASE("lambda1 vanishes with unit weights and speeds") {
    auto r = semidefinite_check(InflowMatrix{0.5}, w, cfg);
    CHECK(r.lambda1 == doctest::Approx(0.0).epsilon(1e-14));
  }
  SUBCASE("lambda2 vanishes at the critical gain") {
    auto r = semidefinite_check(InflowMatrix{kappa_bound(0.5, 0.5)}, w, cfg);
    CHECK(std::abs(r.lambda2) <= 1e-12);
    CHECK(r.negative_semidefinite);
  }
  SUBCASE("hand-evaluated interior gain") {
    auto r = semidefinite_check(InflowMatrix{0.5}, w, cfg);
    CHECK(r.lambda2 == doctest::Approx(0.25 - std::exp(-0.5)));
    CHECK(r.lambda2 == doctest::Approx(-0.3565).epsilon(1e-3));
    CHECK(r.negative_semidefinite);
  }
  SUBCASE("gain above the bound loses semidefiniteness") {
    auto r = semidefinite_check(InflowMatrix{kappa_bound(0.5, 0.5) + 0.01}, w, cfg);
    CHECK(r.lambda2 > 0.0);
    CHECK_FALSE(r.negative_semidefinite);
  }
  SUBCASE("only the 2-processor shape is supported") {
    NetworkSpec net;
    net.m = 3;
    net.velocity = {1.0, 1.0, 1.0};
    net.capacity = {6.0, 5.0, 4.0};
    net.length = 0.5;
    Config c3 = Config::validated(net, GridSpec::from_resolution(0.5, 0.25, 0.25, 0.25));
    CHECK_THROWS_AS(semidefinite_check(InflowMatrix{0.5}, uniform_w(0.5, 0.5, 3), c3),
                    UnsupportedShape);
  }
}

TEST_CASE("policies preserve the equilibrium") {
  Config cfg = two_proc(0.5, 0.25, 0.25, 1.0);
  LyapunovWeights w = uniform_w(0.5, 0.5);
  SimState zero = SimState::zero(cfg);
  for (FeedbackLaw law : {FeedbackLaw{LinearLaw{0.7}}, FeedbackLaw{MixedLaw{0.7}}}) {
    auto policy = make_policy(law, w, cfg);
    SimState end = simulate(cfg, zero, policy);
    for (int e = 0; e < 2; ++e) {
      CHECK(end.queue[e] == 0.0);
      for (double f : end.flux[e]) CHECK(f == 0.0);
    }
  }
}
