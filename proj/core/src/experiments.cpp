#include "prodnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace prodnet {

SimState Scenario::initial_state() const {
  if (!initial_flux_table.empty()) {
    SimState s = SimState::zero(config);
    if (static_cast<int>(initial_flux_table.size()) != config.net.m) {
      throw ValidationError("flux table must have one row per processor");
    }
    for (int e = 0; e < config.net.m; ++e) {
      if (static_cast<int>(initial_flux_table[e].size()) != config.grid.cells) {
        throw ValidationError("flux table row " + std::to_string(e + 1) +
                              " must have N entries");
      }
      s.flux[e] = initial_flux_table[e];
      s.queue[e] = initial_queues[e];
    }
    if (s.queue[0] != 0.0) throw ValidationError("q_1 must be 0");
    return s;
  }
  return SimState::constant(config, initial_flux, initial_queues);
}

std::vector<std::string> Scenario::warnings() const {
  std::vector<std::string> out;
  for (int e = 0; e < config.net.m; ++e) {
    const double f0 = initial_flux_table.empty()
                          ? initial_flux[e]
                          : *std::max_element(initial_flux_table[e].begin(),
                                              initial_flux_table[e].end());
    if (f0 > config.net.capacity[e] + 1e-12) {
      std::ostringstream os;
      os << "initial flux " << f0 << " on processor " << e + 1 << " exceeds mu_"
         << e + 1 << " = " << config.net.capacity[e]
         << "; outside the linear-advection regime";
      out.push_back(os.str());
    }
  }
  double kappa = 0.0;
  if (const auto* lin = std::get_if<LinearLaw>(&law)) kappa = lin->kappa;
  if (const auto* mx = std::get_if<MixedLaw>(&law)) kappa = mx->kappa;
  if (kappa > 0.0 && weights.uniform_eta()) {
    const double bound = kappa_bound(weights.eta.front(), config.net.length);
    if (kappa > bound + 1e-12) {
      std::ostringstream os;
      os << "gain kappa = " << kappa << " exceeds the guaranteed bound exp(-eta l) = "
         << bound;
      out.push_back(os.str());
    }
  }
  return out;
}

RunResult run_scenario(const Scenario& sc, const std::string& label) {
  RunResult res;
  res.label = label.empty() ? sc.name : label;
  sc.weights.validate(sc.config.net.m);
  res.rate = decay_rate(sc.config, sc.weights);
  const Config& cfg = sc.config;
  const double tau = cfg.grid.tau;

  SimState init = sc.initial_state();
  // Capacity warning regime: queues inject exactly mu_e, so only the initial
  // data can put the flux above capacity.
  res.rows.reserve(cfg.grid.steps);

  double V0 = discrete_V(init, sc.weights, cfg, 0.0).V;
  res.V0 = V0;

  auto observer = [&](int k, double t, const SimState& s, const StepDiagnostics& diag) {
    TrajectoryRow row;
    row.k = k;
    row.t = t;
    LyapunovSample ls = discrete_V(s, sc.weights, cfg, t);
    row.V = ls.V;
    row.V1 = ls.V1;
    row.V2 = ls.V2;
    row.V_up = upper_bound(V0, res.rate.nu, tau, k);
    ResidualSample rs = stability_residual(s, diag, sc.weights, cfg, t);
    row.residual = rs.S2 + rs.Z2;
    row.verdict = rs.pass;
    if (!rs.pass && res.first_failing_k < 0) res.first_failing_k = k;
    res.all_residuals_pass = res.all_residuals_pass && rs.pass;
    row.u1 = diag.applied_control;
    row.queues = s.queue;
    row.f_out.reserve(cfg.net.m);
    for (int e = 1; e <= cfg.net.m; ++e) row.f_out.push_back(s.flux[e - 1].back());
    res.rows.push_back(std::move(row));
  };

  simulate(cfg, init, make_policy(sc.law, sc.weights, cfg), observer, sc.coupling);

  res.VT = res.rows.back().V;
  double maxinc = -std::numeric_limits<double>::infinity();
  int arg = 0;
  for (std::size_t k = 0; k + 1 < res.rows.size(); ++k) {
    const double inc = res.rows[k + 1].V - res.rows[k].V;
    if (inc > maxinc) {
      maxinc = inc;
      arg = static_cast<int>(k);
    }
  }
  res.max_increment = maxinc;
  res.argmax_increment = arg;
  return res;
}

namespace {

Scenario make_scenario(std::string name, int m, std::vector<double> v,
                       std::vector<double> mu, double l, double h, double tau,
                       double T, std::vector<double> f0, std::vector<double> q0,
                       double eta, double eta_tilde, FeedbackLaw law) {
  Scenario sc;
  sc.name = std::move(name);
  sc.config = Config::validated({m, std::move(v), std::move(mu), l},
                                GridSpec::from_resolution(l, h, tau, T));
  sc.initial_flux = std::move(f0);
  sc.initial_queues = std::move(q0);
  sc.weights = LyapunovWeights::uniform(m, 1.0, eta, 1.0, eta_tilde);
  sc.law = std::move(law);
  return sc;
}

constexpr double kSweepEtaTilde = 0.5752;

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"fig3-kink", "fig4-lf-vs-mf", "fig5-increasing-queue", "fig7-capacity-gap"};
}

std::vector<Scenario> builtin_scenarios(const std::string& name) {
  if (name == "fig3-kink") {
    // Three processors, two active queues; the linear gain cannot compensate.
    auto lf = make_scenario("fig3-kink-lf", 3, {1, 1, 1}, {10, 9, 8}, 1.0, 0.01,
                            0.01, 50.0, {10, 9, 8}, {0, 0, 0}, 0.1, 0.1,
                            LinearLaw{0.1});
    auto mf = make_scenario("fig3-kink-mf", 3, {1, 1, 1}, {10, 9, 8}, 1.0, 0.01,
                            0.01, 50.0, {10, 9, 8}, {0, 0, 0}, 0.1, 0.1,
                            MixedLaw{kappa_bound(0.1, 1.0)});
    return {lf, mf};
  }
  if (name == "fig4-lf-vs-mf") {
    auto lf = make_scenario("fig4-lf", 2, {1, 1}, {6, 4}, 0.5, 0.01, 0.01, 30.0,
                            {4, 4}, {0, 1}, 0.5, 0.5, LinearLaw{0.5});
    auto mf = make_scenario("fig4-mf", 2, {1, 1}, {6, 4}, 0.5, 0.01, 0.01, 30.0,
                            {4, 4}, {0, 1}, 0.5, 0.5,
                            MixedLaw{kappa_bound(0.5, 0.5)});
    return {lf, mf};
  }
  if (name == "fig5-increasing-queue") {
    auto mf = make_scenario("fig5-mf", 2, {1, 1}, {6, 4}, 0.5, 0.01, 0.01, 30.0,
                            {6, 4}, {0, 0}, 0.2, 0.2,
                            MixedLaw{kappa_bound(0.2, 0.5)});
    return {mf};
  }
  if (name == "fig7-capacity-gap") {
    std::vector<Scenario> out;
    for (double mu1 : {6.0, 8.0, 10.0, 12.0}) {
      for (bool mixed : {false, true}) {
        const double kappa = kappa_bound(0.2, 0.5);
        FeedbackLaw law = mixed ? FeedbackLaw(MixedLaw{kappa}) : FeedbackLaw(LinearLaw{kappa});
        std::ostringstream nm;
        nm << "fig7-mu1-" << mu1 << (mixed ? "-mf" : "-lf");
        out.push_back(make_scenario(nm.str(), 2, {1, 1}, {mu1, 4}, 0.5, 0.01,
                                    0.01, 30.0, {mu1, 4}, {0, 0}, 0.2, 0.2, law));
      }
    }
    return out;
  }
  throw UnknownScenario("unknown scenario '" + name + "'");
}

std::vector<RunResult> run_builtin(const std::string& name) {
  std::vector<RunResult> results;
  for (const auto& sc : builtin_scenarios(name)) results.push_back(run_scenario(sc));
  return results;
}

std::vector<ConvergenceRow> convergence_study(double velocity,
                                              const std::vector<int>& N_list) {
  std::vector<ConvergenceRow> rows;
  rows.reserve(N_list.size());
  const double eta = 0.575;
  for (int N : N_list) {
    const double h = 1.0 / (2.0 * N);  // l = 1/2, N cells
    const double tau = h / velocity;   // CFL equality
    auto sc = make_scenario("convergence", 2, {velocity, velocity}, {6, 4}, 0.5,
                            h, tau, 30.0, {4, 4}, {0, 1}, eta, eta,
                            MixedLaw{kappa_bound(eta, 0.5)});
    RunResult run = run_scenario(sc);
    ConvergenceRow row;
    row.N = N;
    row.h = h;
    row.nu = run.rate.nu;
    double linf = 0.0, l2 = 0.0;
    for (const auto& r : run.rows) {
      const double d = r.V_up - r.V;
      linf = std::max(linf, std::abs(d));
      l2 += tau * d * d;
    }
    row.err_inf = linf;
    row.err_l2 = std::sqrt(l2);
    if (!rows.empty()) {
      const auto& prev = rows.back();
      const double dn = std::log(static_cast<double>(N) / prev.N);
      row.rate_inf = std::log(prev.err_inf / row.err_inf) / dn;
      row.rate_l2 = std::log(prev.err_l2 / row.err_l2) / dn;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<KappaSweepRow> kappa_sweep(const std::vector<double>& kappas, double h,
                                       double T) {
  std::vector<KappaSweepRow> rows;
  rows.reserve(kappas.size());
  const double l = 0.5;
  for (double kappa : kappas) {
    if (!(kappa > 0.0 && kappa < 1.0)) {
      throw ValidationError("kappa_sweep requires kappa in (0,1)");
    }
    const double eta = -std::log(kappa) / l;  // kappa = exp(-eta l) exactly
    Scenario sc;
    sc.name = "kappa-sweep";
    sc.config = Config::validated({2, {1, 1}, {6, 4}, l},
                                  GridSpec::from_resolution(l, h, h, T));
    sc.initial_flux = {4, 4};
    sc.initial_queues = {0, 1};
    sc.weights = LyapunovWeights::uniform(2, 1.0, eta, 1.0, kSweepEtaTilde);
    sc.law = MixedLaw{kappa};
    RunResult run = run_scenario(sc);
    rows.push_back({kappa, run.VT / run.V0, eta, kSweepEtaTilde, run.rate.nu});
  }
  return rows;
}

std::vector<CapacityGapRow> capacity_gap_study(const std::vector<double>& mu1_list) {
  std::vector<CapacityGapRow> rows;
  const double kappa = kappa_bound(0.2, 0.5);
  for (double mu1 : mu1_list) {
    for (bool mixed : {false, true}) {
      FeedbackLaw law = mixed ? FeedbackLaw(MixedLaw{kappa}) : FeedbackLaw(LinearLaw{kappa});
      std::ostringstream nm;
      nm << "gap-mu1-" << mu1 << (mixed ? "-mf" : "-lf");
      auto sc = make_scenario(nm.str(), 2, {1, 1}, {mu1, 4}, 0.5, 0.01, 0.01,
                              30.0, {mu1, 4}, {0, 0}, 0.2, 0.2, law);
      CapacityGapRow row;
      row.mu1 = mu1;
      row.law = mixed ? "mixed" : "linear";
      row.run = run_scenario(sc);
      row.kink = std::max(row.run.max_increment, 0.0);
      row.kink_at = row.run.argmax_increment;
      row.early_u1 = row.run.rows.front().u1;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

OracleReport oracle_smallcase() {
  // Fixed case: m=2, N=2, K=4, l=1/2, h=tau=1/4, v=(1,1), mu=(6,4),
  // f1=(3,5), f2=(2,4), q=(0,1/2), open-loop u=(1,5,0,2).
  const int m = 2, N = 2, K = 4;
  const double l = 0.5, h = 0.25, tau = 0.25;
  const double mu[2] = {6.0, 4.0};
  const double u[4] = {1.0, 5.0, 0.0, 2.0};
  const double eta = 0.5, eta_tilde = 0.5;

  // Straight-line transcription of the update rules, independent of the
  // engine's stepping code.
  double f[2][2] = {{3.0, 5.0}, {2.0, 4.0}};
  double q[2] = {0.0, 0.5};
  double ghost[2] = {0.0, 0.0};
  double Vref[4];
  double fref[4][2][2];
  double qref[4][2];
  double ghostref[4][2];
  for (int k = 0; k < K; ++k) {
    const double tk = k * tau;
    // boundary values from time-k data
    ghost[0] = u[k];
    ghost[1] = (q[1] > 0.0) ? mu[1] : std::min(f[0][N - 1], mu[1]);
    const double gin2 = f[0][N - 1];
    const double gout2 = ghost[1];
    // Lyapunov value at time k, cell centers (e-1)l + (j+1/2)h
    double V = 0.0;
    for (int e = 0; e < m; ++e) {
      for (int j = 0; j < N; ++j) {
        const double x = e * l + (j + 0.5) * h;
        V += f[e][j] * f[e][j] * std::exp(-eta * x) * h;
      }
      V += q[e] * q[e] * std::exp(-eta_tilde * tk);
    }
    Vref[k] = V;
    for (int e = 0; e < m; ++e) {
      ghostref[k][e] = ghost[e];
      qref[k][e] = q[e];
      for (int j = 0; j < N; ++j) fref[k][e][j] = f[e][j];
    }
    if (k == K - 1) break;
    // upwind with ratio tau/h = 1, then explicit Euler queues
    double next[2][2];
    for (int e = 0; e < m; ++e) {
      next[e][0] = f[e][0] - tau / h * (f[e][0] - ghost[e]);
      next[e][1] = f[e][1] - tau / h * (f[e][1] - f[e][0]);
      f[e][0] = next[e][0];
      f[e][1] = next[e][1];
    }
    q[1] = std::max(0.0, q[1] + tau * (gin2 - gout2));
  }

  // Engine run over the same case.
  Config cfg = Config::validated({2, {1, 1}, {mu[0], mu[1]}, l},
                                 GridSpec::from_resolution(l, h, tau, (K - 1) * tau));
  SimState init = SimState::zero(cfg);
  init.flux[0] = {3.0, 5.0};
  init.flux[1] = {2.0, 4.0};
  init.queue[1] = 0.5;
  LyapunovWeights w = LyapunovWeights::uniform(2, 1.0, eta, 1.0, eta_tilde);

  OracleReport report;
  auto mismatch = [&](const std::string& what, int k, double got, double want) {
    if (report.pass) {
      std::ostringstream os;
      os << what << " at k=" << k << ": engine " << got << " vs oracle " << want;
      report.first_mismatch = os.str();
      report.pass = false;
    }
  };
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  };

  auto observer = [&](int k, double t, const SimState& s, const StepDiagnostics&) {
    for (int e = 0; e < m; ++e) {
      for (int j = 0; j < N; ++j) {
        if (!close(s.flux[e][j], fref[k][e][j])) {
          mismatch("f_{" + std::to_string(e + 1) + "," + std::to_string(j) + "}", k,
                   s.flux[e][j], fref[k][e][j]);
        }
      }
      if (!close(s.queue[e], qref[k][e])) {
        mismatch("q_" + std::to_string(e + 1), k, s.queue[e], qref[k][e]);
      }
      if (!close(s.ghost[e], ghostref[k][e])) {
        mismatch("ghost_" + std::to_string(e + 1), k, s.ghost[e], ghostref[k][e]);
      }
    }
    const double V = discrete_V(s, w, cfg, t).V;
    if (!close(V, Vref[k])) mismatch("V", k, V, Vref[k]);
  };

  OpenLoopLaw open;
  open.inflow = [&](double t) { return u[static_cast<int>(std::lround(t / tau))]; };
  simulate(cfg, init, make_policy(open, w, cfg), observer);
  return report;
}

}  // namespace prodnet
