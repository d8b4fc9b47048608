#ifndef PRODNET_FEEDBACK_HPP
#define PRODNET_FEEDBACK_HPP

#include <functional>
#include <variant>
#include <vector>

#include "prodnet/discretization.hpp"
#include "prodnet/lyapunov.hpp"
#include "prodnet/network.hpp"
#include "prodnet/state.hpp"

namespace prodnet {

/// Prescribed inflow profile, no feedback.
struct OpenLoopLaw {
  std::function<double(double t)> inflow;
};

/// u_1^k = kappa * f_{m,N-1}^k regardless of queue state.
struct LinearLaw {
  double kappa = 0.0;
};

/// Queue-aware law: sqrt(max(Y^k, 0)) while any internal queue is positive,
/// linear with gain kappa once all queues are empty.
struct MixedLaw {
  double kappa = 0.0;
};

using FeedbackLaw = std::variant<OpenLoopLaw, LinearLaw, MixedLaw>;

/// Largest gain with a stability guarantee: exp(-eta l).
double kappa_bound(double eta, double l);

double linear_control(double kappa, double f_out_last);

/// Y^k, the admissible squared control input in the positive-queue regime.
/// Uses the configured boundary-coordinate convention and the hard coupling
/// outflows of the current state. Requires uniform eta, eta_tilde, velocity
/// and unit p, c (the regime in which the bound is derived). May be negative.
double mixed_bound_Y(const SimState& state, const LyapunovWeights& w,
                     const Config& cfg, double t_k);

/// Mixed feedback: linear branch with the given kappa when every internal
/// queue is exactly 0, sqrt(max(Y^k,0)) otherwise. Clamped to [0, mu_1].
double mixed_control(const SimState& state, const MixedLaw& law,
                     const LyapunovWeights& w, const Config& cfg, double t_k);

/// Continuous-time analogue X(t) of the admissible squared control, with the
/// smoothed queue outflow min(q/epsilon, mu). Diagnostic only; never drives
/// the simulation. Requires uniform velocities.
double continuous_bound_X(const std::vector<double>& boundary_flux,
                          const std::vector<double>& queues, const NetworkSpec& net,
                          double eta, double eta_tilde, double epsilon, double t);

/// Inflow matrix g_in = G f(t,l); for the serial 2-processor loop
/// G = [[0, kappa], [1, 0]].
struct InflowMatrix {
  double kappa = 0.0;
};

struct SemidefiniteResult {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool negative_semidefinite = false;
};

/// Eigenvalues of G^T P_0 Lambda G - P_{N-1} Lambda for the 2-processor
/// serial loop under the configured boundary-coordinate convention.
SemidefiniteResult semidefinite_check(const InflowMatrix& G, const LyapunovWeights& w,
                                      const Config& cfg);

/// Wraps a feedback law as a control policy for simulate().
ControlPolicy make_policy(const FeedbackLaw& law, const LyapunovWeights& w,
                          const Config& cfg);

}  // namespace prodnet

#endif
