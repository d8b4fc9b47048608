#include "prodnet/feedback.hpp"

#include <algorithm>
#include <cmath>

namespace prodnet {

double kappa_bound(double eta, double l) {
  if (eta < 0.0 || !(l > 0.0)) {
    throw ValidationError("kappa_bound requires eta >= 0 and l > 0");
  }
  return std::exp(-eta * l);
}

double linear_control(double kappa, double f_out_last) {
  return kappa * f_out_last;
}

namespace {
void require_mixed_regime(const LyapunovWeights& w, const Config& cfg) {
  if (!w.uniform_eta() || !w.uniform_eta_tilde()) {
    throw AssumptionViolated("mixed feedback bound requires uniform eta and eta_tilde");
  }
  for (double v : cfg.net.velocity) {
    if (v != cfg.net.velocity.front()) {
      throw AssumptionViolated("mixed feedback bound requires uniform velocities");
    }
  }
  for (std::size_t e = 0; e < w.p.size(); ++e) {
    if (w.p[e] != 1.0 || w.c[e] != 1.0) {
      throw AssumptionViolated("mixed feedback bound requires p_e = c_e = 1");
    }
  }
}
}  // namespace

double mixed_bound_Y(const SimState& state, const LyapunovWeights& w,
                     const Config& cfg, double t_k) {
  require_mixed_regime(w, cfg);
  const int m = cfg.net.m;
  const double eta = w.eta.front();
  const double eta_tilde = w.eta_tilde.front();
  const double v = cfg.net.velocity.front();
  const double tau = cfg.grid.tau;
  const double tw = std::exp(-eta_tilde * v * t_k) * std::exp(-eta_tilde * v * tau);

  double Y = 0.0;
  for (int e = 1; e <= m; ++e) {
    const double fout = state.flux[e - 1].back();
    Y += fout * fout * std::exp(-eta * boundary_coords_of(e, cfg).at_outflow);
  }
  for (int e = 2; e <= m; ++e) {
    const double gout = coupling_outflow(state, e, cfg.net);
    const double gin = state.flux[e - 2].back();
    const double d = gin - gout;
    Y -= gout * gout * std::exp(-eta * boundary_coords_of(e, cfg).at_inflow);
    Y -= (2.0 * state.queue[e - 1] * d + tau * d * d) * tw;
  }
  return Y;
}

double mixed_control(const SimState& state, const MixedLaw& law,
                     const LyapunovWeights& w, const Config& cfg, double t_k) {
  bool queues_empty = true;
  for (int e = 2; e <= cfg.net.m; ++e) {
    if (state.queue[e - 1] != 0.0) {
      queues_empty = false;
      break;
    }
  }
  double u;
  if (queues_empty) {
    u = linear_control(law.kappa, state.flux[cfg.net.m - 1].back());
  } else {
    u = std::sqrt(std::max(mixed_bound_Y(state, w, cfg, t_k), 0.0));
  }
  return std::clamp(u, 0.0, cfg.net.capacity[0]);
}

double continuous_bound_X(const std::vector<double>& boundary_flux,
                          const std::vector<double>& queues, const NetworkSpec& net,
                          double eta, double eta_tilde, double epsilon, double t) {
  for (double v : net.velocity) {
    if (v != net.velocity.front()) {
      throw AssumptionViolated("continuous bound X(t) requires uniform velocities");
    }
  }
  if (!(epsilon > 0.0)) throw ValidationError("smoothing epsilon must be positive");
  const double v = net.velocity.front();
  const double l = net.length;
  const double tw = std::exp(-eta_tilde * v * t);

  double X = 0.0;
  for (int e = 1; e <= net.m; ++e) {
    const double f = boundary_flux[e - 1];
    X += f * f * std::exp(-eta * l);
  }
  for (int e = 2; e <= net.m; ++e) {
    const double q = queues[e - 1];
    const double out = std::min(q / epsilon, net.capacity[e - 1]);
    X -= out * out;
    X -= 2.0 / v * q * boundary_flux[e - 2] * tw;
    X += 2.0 / v * q * out * tw;
  }
  return X;
}

SemidefiniteResult semidefinite_check(const InflowMatrix& G, const LyapunovWeights& w,
                                      const Config& cfg) {
  if (cfg.net.m != 2) {
    throw UnsupportedShape("semidefinite_check is derived for the 2-processor loop");
  }
  if (!w.uniform_eta()) {
    throw AssumptionViolated("semidefinite_check requires uniform eta");
  }
  const double eta = w.eta.front();
  const double v1 = cfg.net.velocity[0], v2 = cfg.net.velocity[1];
  const BoundaryPair b1 = boundary_coords_of(1, cfg);
  const BoundaryPair b2 = boundary_coords_of(2, cfg);

  SemidefiniteResult r;
  r.lambda1 = w.p[1] * v2 * std::exp(-eta * b2.at_inflow) -
              w.p[0] * v1 * std::exp(-eta * b1.at_outflow);
  r.lambda2 = G.kappa * G.kappa * w.p[0] * v1 * std::exp(-eta * b1.at_inflow) -
              w.p[1] * v2 * std::exp(-eta * b2.at_outflow);
  r.negative_semidefinite = r.lambda1 <= 1e-12 && r.lambda2 <= 1e-12;
  return r;
}

ControlPolicy make_policy(const FeedbackLaw& law, const LyapunovWeights& w,
                          const Config& cfg) {
  if (const auto* open = std::get_if<OpenLoopLaw>(&law)) {
    auto profile = open->inflow;
    return [profile](int, double t, const SimState&) { return profile(t); };
  }
  if (const auto* lin = std::get_if<LinearLaw>(&law)) {
    const double kappa = lin->kappa;
    const int m = cfg.net.m;
    return [kappa, m](int, double, const SimState& s) {
      return linear_control(kappa, s.flux[m - 1].back());
    };
  }
  const MixedLaw mixed = std::get<MixedLaw>(law);
  return [mixed, w, cfg](int, double t, const SimState& s) {
    return mixed_control(s, mixed, w, cfg, t);
  };
}

}  // namespace prodnet
