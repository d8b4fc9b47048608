#ifndef PRODNET_LYAPUNOV_HPP
#define PRODNET_LYAPUNOV_HPP

#include <vector>

#include "prodnet/discretization.hpp"
#include "prodnet/network.hpp"
#include "prodnet/state.hpp"

namespace prodnet {

/// Weights of the energy functional: P(x) = diag(p_e exp(-eta_e x)) in space,
/// Q(t) = diag(c_e exp(-eta_tilde_e v_e t)) in time. All strictly positive.
struct LyapunovWeights {
  std::vector<double> p;
  std::vector<double> eta;
  std::vector<double> c;
  std::vector<double> eta_tilde;

  /// Same p, eta, c, eta_tilde on every processor.
  static LyapunovWeights uniform(int m, double p, double eta, double c, double eta_tilde);
  void validate(int m) const;  // throws ValidationError

  bool uniform_eta() const;
  bool uniform_eta_tilde() const;
};

struct LyapunovSample {
  double V = 0.0;
  double V1 = 0.0;  // flux part
  double V2 = 0.0;  // queue part
  int k = 0;
};

/// V^k: exponentially space-weighted flux energy (cell centers, cumulative
/// offset across processors) plus exponentially time-weighted queue energy.
LyapunovSample discrete_V(const SimState& state, const LyapunovWeights& w,
                          const Config& cfg, double t_k);

struct DecayRate {
  double nu = 0.0;
  double nu1 = 0.0;  // flux part
  double nu2 = 0.0;  // queue part
};

/// Discrete decay rate nu = min(nu1, nu2) with
///   nu1 = (1/h) min_e(v_e (1 - exp(-eta_e h)))
///   nu2 = (1/h) max_e(v_e) min_e(1 - exp(-eta_tilde_e v_e tau)).
/// Under CFL, 0 < tau*nu <= 1; checked.
DecayRate decay_rate(const Config& cfg, const LyapunovWeights& w);

/// Continuous-limit rate min_e(min(eta_e, eta_tilde_e)) * min_e(v_e).
double analytic_decay_rate(const LyapunovWeights& w, const NetworkSpec& net);

/// V_up^k = V0 * exp(-nu tau k).
double upper_bound(double V0, double nu, double tau, int k);

/// sqrt(sum f^2 h + sum q^2), the discrete L2 product norm.
double discrete_norm(const SimState& state, double h);

/// The four terms of the step estimate and the operational stability verdict
/// S2 + Z2 <= 1e-10 * max(1, V^k).
struct ResidualSample {
  double S1 = 0.0, S2 = 0.0, Z1 = 0.0, Z2 = 0.0;
  bool pass = false;
  double C_lower = 0.0;  // min weight factor: C_lower * ||.||^2 <= V
  double C_upper = 0.0;  // max weight factor: V <= C_upper * ||.||^2
};

/// Requires ghost cells and queue fluxes of step k (from prepare_step/step).
/// S2 uses the configured boundary-coordinate convention; S1 and the norm
/// constants use cell centers.
ResidualSample stability_residual(const SimState& state, const StepDiagnostics& diag,
                                  const LyapunovWeights& w, const Config& cfg,
                                  double t_k);

/// (V^{k+1}-V^k)/tau decomposed into its flux and queue parts, recomputed
/// from two consecutive states.
struct ProofTerms {
  double C1 = 0.0;
  double C2 = 0.0;
};
ProofTerms proof_terms(const SimState& before, const SimState& after,
                       const LyapunovWeights& w, const Config& cfg, double t_k);

struct DecayConvergenceRow {
  double h = 0.0;
  double nu = 0.0;
  double error = 0.0;  // |nu - nu_cont|
  double ratio = 0.0;  // error / previous error (0 for the first row)
};

/// Discrete decay rate versus the continuous limit over an h-refinement with
/// CFL equality (tau = h / max_e v_e). First-order: halving ratios near 1/2.
std::vector<DecayConvergenceRow> decay_convergence(const LyapunovWeights& w,
                                                   const NetworkSpec& net,
                                                   const std::vector<double>& h_list);

}  // namespace prodnet

#endif
