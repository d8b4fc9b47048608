#ifndef PRODNET_EXPERIMENTS_HPP
#define PRODNET_EXPERIMENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "prodnet/feedback.hpp"
#include "prodnet/lyapunov.hpp"

namespace prodnet {

/// A fully specified run: network, grid, initial data, weights, feedback.
struct Scenario {
  std::string name;
  Config config;
  std::vector<double> initial_flux;                // per-processor constants
  std::vector<std::vector<double>> initial_flux_table;  // optional per-cell, overrides
  std::vector<double> initial_queues;
  LyapunovWeights weights;
  FeedbackLaw law;
  CouplingMode coupling;
  int output_stride = 1;

  SimState initial_state() const;

  /// Non-fatal observations: initial flux above capacity (leaves the linear
  /// advection regime), gain above the guaranteed bound exp(-eta l).
  std::vector<std::string> warnings() const;
};

/// One recorded time index of a run.
struct TrajectoryRow {
  int k = 0;
  double t = 0.0;
  double V = 0.0, V1 = 0.0, V2 = 0.0, V_up = 0.0;
  double residual = 0.0;  // S2 + Z2
  bool verdict = true;
  double u1 = 0.0;
  std::vector<double> queues;
  std::vector<double> f_out;
};

struct RunResult {
  std::string label;
  std::vector<TrajectoryRow> rows;  // every step, unstrided
  DecayRate rate;
  double V0 = 0.0;
  double VT = 0.0;
  bool all_residuals_pass = true;
  int first_failing_k = -1;
  double max_increment = 0.0;  // max over k of V^{k+1} - V^k
  int argmax_increment = 0;
};

/// Runs a scenario and records the Lyapunov/feedback/queue series.
RunResult run_scenario(const Scenario& sc, const std::string& label = "");

/// Builtin scenarios with the reference parameters baked in. A builtin may
/// expand to several runs (e.g. the linear/mixed comparison).
std::vector<Scenario> builtin_scenarios(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// Runs every variant of a builtin. Throws UnknownScenario.
std::vector<RunResult> run_builtin(const std::string& name);

struct ConvergenceRow {
  int N = 0;
  double h = 0.0;
  double nu = 0.0;
  double err_inf = 0.0;   // max_k |V_up^k - V^k|
  double err_l2 = 0.0;    // sqrt(sum_k tau (V_up^k - V^k)^2)
  double rate_inf = 0.0;  // between consecutive rows, log(err_i/err_{i+1})/log(N_{i+1}/N_i)
  double rate_l2 = 0.0;
};

/// Decay-rate and upper-bound convergence under h-refinement at CFL equality,
/// on the mixed-feedback reference run with eta = eta_tilde = 0.575.
std::vector<ConvergenceRow> convergence_study(double velocity,
                                              const std::vector<int>& N_list);

struct KappaSweepRow {
  double kappa = 0.0;
  double ratio = 0.0;  // V^T / V^0
  double eta = 0.0;    // -ln(kappa)/l, so that kappa = exp(-eta l) exactly
  double eta_tilde = 0.0;
  double nu = 0.0;
};

/// Mixed-feedback runs over a gain list with eta tied to kappa.
std::vector<KappaSweepRow> kappa_sweep(const std::vector<double>& kappas,
                                       double h = 0.00125, double T = 30.0);

struct CapacityGapRow {
  double mu1 = 0.0;
  std::string law;         // "linear" or "mixed"
  double kink = 0.0;       // max positive V increment
  int kink_at = 0;
  double early_u1 = 0.0;   // applied control at k = 0
  RunResult run;
};

/// Linear versus mixed feedback for a widening capacity gap mu_1 vs mu_2 = 4.
std::vector<CapacityGapRow> capacity_gap_study(const std::vector<double>& mu1_list);

struct OracleReport {
  bool pass = true;
  std::string first_mismatch;
};

/// Straight-line transcription of the m=2, N=2, K=4 scheme compared against
/// the engine, every intermediate value, to 1e-12 relative.
OracleReport oracle_smallcase();

}  // namespace prodnet

#endif
