#ifndef PRODNET_DISCRETIZATION_HPP
#define PRODNET_DISCRETIZATION_HPP

#include <functional>
#include <vector>

#include "prodnet/network.hpp"
#include "prodnet/state.hpp"

namespace prodnet {

enum class CouplingKind { Hard, Smoothed };

/// Queue-to-processor coupling rule. Hard is the piecewise case split used by
/// the discretization; Smoothed replaces the non-empty branch by
/// min(mu_e, q_e/epsilon) and is used by the continuous-bound diagnostic.
struct CouplingMode {
  CouplingKind kind = CouplingKind::Hard;
  double epsilon = 1e-6;
};

/// Outflow of queue e (the inflow of processor e) from time-k data.
/// e >= 2; processor 1's inflow is the control input.
double coupling_outflow(const SimState& state, int e, const NetworkSpec& net,
                        const CouplingMode& mode = {});

/// Per-step bookkeeping: applied boundary values, queue fluxes, clamp events.
struct StepDiagnostics {
  double applied_control = 0.0;    // u_1^k after clamping to [0, mu_1]
  bool control_clamped = false;
  std::vector<double> g_in;        // [m]
  std::vector<double> g_out;       // [m]
  std::vector<int> queue_clamps;   // processors (1-based) clamped at 0
};

/// Left-sided upwind update of every interior cell; ghost cells are inputs
/// and remain untouched. Requires CFL.
void upwind_step(SimState& state, const Config& cfg);

/// Explicit Euler queue update with clamping at 0.
/// Returns the new queue vector; clamped processors are appended to `clamps`.
std::vector<double> queue_step(const std::vector<double>& queue,
                               const std::vector<double>& g_in,
                               const std::vector<double>& g_out, double tau,
                               std::vector<int>* clamps = nullptr);

/// Fills ghost cells and queue fluxes for step k from time-k data:
/// f_{1,-1} = clamped control, f_{e,-1} = coupling outflow for e >= 2.
StepDiagnostics prepare_step(SimState& state, double u1, const Config& cfg,
                             const CouplingMode& mode = {});

/// One full time step: coupling, ghost cells, upwind transport, queue update.
/// Everything reads time-k data only.
SimState step(const SimState& state, double u1, const Config& cfg,
              const CouplingMode& mode = {}, StepDiagnostics* diag = nullptr);

/// Observer invoked once per time index k with the state at k (ghosts set),
/// the applied control, and the step diagnostics. For the final index K-1 the
/// diagnostics describe the control that would be applied next.
using StepObserver = std::function<void(int k, double t, const SimState& state,
                                        const StepDiagnostics& diag)>;

/// Control policy: u_1^k from the time-k state.
using ControlPolicy = std::function<double(int k, double t, const SimState& state)>;

/// Runs the scheme over k in {0,...,K-1}. Deterministic for fixed inputs;
/// throws NonFiniteState with the offending (e, j, k) if the state blows up.
SimState simulate(const Config& cfg, const SimState& initial,
                  const ControlPolicy& control, const StepObserver& observer = {},
                  const CouplingMode& mode = {});

}  // namespace prodnet

#endif
