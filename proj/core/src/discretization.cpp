#include "prodnet/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace prodnet {

SimState SimState::zero(const Config& cfg) {
  SimState s;
  s.flux.assign(cfg.net.m, std::vector<double>(cfg.grid.cells, 0.0));
  s.ghost.assign(cfg.net.m, 0.0);
  s.queue.assign(cfg.net.m, 0.0);
  return s;
}

SimState SimState::constant(const Config& cfg, const std::vector<double>& flux0,
                            const std::vector<double>& queue0) {
  if (static_cast<int>(flux0.size()) != cfg.net.m ||
      static_cast<int>(queue0.size()) != cfg.net.m) {
    throw ValidationError("initial data must have one entry per processor");
  }
  SimState s = zero(cfg);
  for (int e = 0; e < cfg.net.m; ++e) {
    std::fill(s.flux[e].begin(), s.flux[e].end(), flux0[e]);
    if (queue0[e] < 0.0) throw ValidationError("initial queues must be nonnegative");
    s.queue[e] = queue0[e];
  }
  if (s.queue[0] != 0.0) {
    throw ValidationError("q_1 must be 0: the first processor has no upstream queue "
                          "once f_in <= mu_1 is enforced");
  }
  return s;
}

double coupling_outflow(const SimState& state, int e, const NetworkSpec& net,
                        const CouplingMode& mode) {
  if (e < 2 || e > net.m) {
    throw IndexOutOfRange("coupling_outflow: e must be in {2,...,m}; processor 1's "
                          "inflow is the control input");
  }
  const double mu = net.capacity[e - 1];
  const double upstream = state.flux[e - 2].back();
  const double q = state.queue[e - 1];
  if (q == 0.0) return std::min(upstream, mu);  // empty-queue pass-through
  if (mode.kind == CouplingKind::Hard) return mu;
  if (!(mode.epsilon > 0.0)) throw ValidationError("smoothed coupling requires epsilon > 0");
  return std::min(mu, q / mode.epsilon);
}

void upwind_step(SimState& state, const Config& cfg) {
  const int N = cfg.grid.cells;
  const double r = cfg.grid.tau / cfg.grid.h;
  for (int e = 0; e < cfg.net.m; ++e) {
    const double c = r * cfg.net.velocity[e];
    auto& f = state.flux[e];
    for (int j = N - 1; j >= 1; --j) f[j] -= c * (f[j] - f[j - 1]);
    f[0] -= c * (f[0] - state.ghost[e]);
  }
}

std::vector<double> queue_step(const std::vector<double>& queue,
                               const std::vector<double>& g_in,
                               const std::vector<double>& g_out, double tau,
                               std::vector<int>* clamps) {
  std::vector<double> next(queue.size());
  for (std::size_t e = 0; e < queue.size(); ++e) {
    const double q = queue[e] + tau * (g_in[e] - g_out[e]);
    if (q < 0.0) {
      next[e] = 0.0;
      if (clamps) clamps->push_back(static_cast<int>(e) + 1);
    } else {
      next[e] = q;
    }
  }
  return next;
}

StepDiagnostics prepare_step(SimState& state, double u1, const Config& cfg,
                             const CouplingMode& mode) {
  const int m = cfg.net.m;
  StepDiagnostics diag;
  diag.g_in.assign(m, 0.0);
  diag.g_out.assign(m, 0.0);

  double u = u1;
  // The stability analysis assumes f_in^k <= mu_1; also rules out negative inflow.
  const double lo = 0.0, hi = cfg.net.capacity[0];
  if (u < lo || u > hi) {
    u = std::clamp(u, lo, hi);
    diag.control_clamped = true;
  }
  diag.applied_control = u;

  state.ghost[0] = u;
  diag.g_in[0] = u;
  diag.g_out[0] = u;  // q_1 stays 0
  for (int e = 2; e <= m; ++e) {
    const double out = coupling_outflow(state, e, cfg.net, mode);
    state.ghost[e - 1] = out;
    diag.g_out[e - 1] = out;
    diag.g_in[e - 1] = state.flux[e - 2].back();
  }
  return diag;
}

namespace {
void check_finite(const SimState& s, int k) {
  for (std::size_t e = 0; e < s.flux.size(); ++e) {
    for (std::size_t j = 0; j < s.flux[e].size(); ++j) {
      if (!std::isfinite(s.flux[e][j])) {
        throw NonFiniteState("non-finite flux at (e=" + std::to_string(e + 1) +
                                 ", j=" + std::to_string(j) + ", k=" + std::to_string(k) + ")",
                             static_cast<int>(e) + 1, static_cast<int>(j), k);
      }
    }
    if (!std::isfinite(s.queue[e])) {
      throw NonFiniteState("non-finite queue q_" + std::to_string(e + 1) +
                               " at k=" + std::to_string(k),
                           static_cast<int>(e) + 1, -1, k);
    }
  }
}
}  // namespace

SimState step(const SimState& state, double u1, const Config& cfg,
              const CouplingMode& mode, StepDiagnostics* diag_out) {
  SimState next = state;
  StepDiagnostics diag = prepare_step(next, u1, cfg, mode);
  upwind_step(next, cfg);
  next.queue = queue_step(state.queue, diag.g_in, diag.g_out, cfg.grid.tau,
                          &diag.queue_clamps);
  next.k = state.k + 1;
  check_finite(next, next.k);
  if (diag_out) *diag_out = std::move(diag);
  return next;
}

SimState simulate(const Config& cfg, const SimState& initial,
                  const ControlPolicy& control, const StepObserver& observer,
                  const CouplingMode& mode) {
  SimState state = initial;
  state.k = 0;
  check_finite(state, 0);
  const int K = cfg.grid.steps;
  for (int k = 0; k < K; ++k) {
    const double t = k * cfg.grid.tau;
    const double u1 = control(k, t, state);
    StepDiagnostics diag = prepare_step(state, u1, cfg, mode);
    if (observer) observer(k, t, state, diag);
    if (k == K - 1) break;
    upwind_step(state, cfg);
    state.queue = queue_step(state.queue, diag.g_in, diag.g_out, cfg.grid.tau,
                             &diag.queue_clamps);
    state.k = k + 1;
    check_finite(state, state.k);
  }
  return state;
}

}  // namespace prodnet
