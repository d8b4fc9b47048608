#include "prodnet/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace prodnet {

LyapunovWeights LyapunovWeights::uniform(int m, double p, double eta, double c,
                                         double eta_tilde) {
  LyapunovWeights w;
  w.p.assign(m, p);
  w.eta.assign(m, eta);
  w.c.assign(m, c);
  w.eta_tilde.assign(m, eta_tilde);
  return w;
}

void LyapunovWeights::validate(int m) const {
  auto check = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != m) {
      throw ValidationError(std::string(name) + " must have m entries");
    }
    for (double x : v) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw ValidationError(std::string(name) + " entries must be positive");
      }
    }
  };
  check(p, "p");
  check(eta, "eta");
  check(c, "c");
  check(eta_tilde, "eta_tilde");
}

namespace {
bool all_equal(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}
}  // namespace

bool LyapunovWeights::uniform_eta() const { return all_equal(eta); }
bool LyapunovWeights::uniform_eta_tilde() const { return all_equal(eta_tilde); }

LyapunovSample discrete_V(const SimState& state, const LyapunovWeights& w,
                          const Config& cfg, double t_k) {
  LyapunovSample s;
  s.k = state.k;
  const int N = cfg.grid.cells;
  for (int e = 1; e <= cfg.net.m; ++e) {
    const double pe = w.p[e - 1], etae = w.eta[e - 1];
    double acc = 0.0;
    for (int j = 0; j < N; ++j) {
      const double f = state.flux[e - 1][j];
      acc += f * f * std::exp(-etae * cell_center(e, j, cfg.net, cfg.grid));
    }
    s.V1 += pe * acc * cfg.grid.h;
    const double q = state.queue[e - 1];
    s.V2 += q * q * w.c[e - 1] * std::exp(-w.eta_tilde[e - 1] * cfg.net.velocity[e - 1] * t_k);
  }
  s.V = s.V1 + s.V2;
  return s;
}

DecayRate decay_rate(const Config& cfg, const LyapunovWeights& w) {
  w.validate(cfg.net.m);
  DecayRate r;
  const double h = cfg.grid.h, tau = cfg.grid.tau;
  double n1 = std::numeric_limits<double>::infinity();
  double n2 = std::numeric_limits<double>::infinity();
  for (int e = 0; e < cfg.net.m; ++e) {
    const double v = cfg.net.velocity[e];
    n1 = std::min(n1, v * (1.0 - std::exp(-w.eta[e] * h)));
    n2 = std::min(n2, 1.0 - std::exp(-w.eta_tilde[e] * v * tau));
  }
  r.nu1 = n1 / h;
  r.nu2 = cfg.net.max_velocity() * n2 / h;
  r.nu = std::min(r.nu1, r.nu2);
  const double tn = tau * r.nu;
  if (!(tn > 0.0 && tn <= 1.0)) {
    throw ValidationError("tau*nu = " + std::to_string(tn) +
                          " outside (0,1]; configuration violates the CFL-backed bound");
  }
  return r;
}

double analytic_decay_rate(const LyapunovWeights& w, const NetworkSpec& net) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < w.eta.size(); ++e) {
    m = std::min(m, std::min(w.eta[e], w.eta_tilde[e]));
  }
  return m * net.min_velocity();
}

double upper_bound(double V0, double nu, double tau, int k) {
  return V0 * std::exp(-nu * tau * k);
}

double discrete_norm(const SimState& state, double h) {
  double acc = 0.0;
  for (const auto& row : state.flux) {
    for (double f : row) acc += f * f * h;
  }
  for (double q : state.queue) acc += q * q;
  return std::sqrt(acc);
}

ResidualSample stability_residual(const SimState& state, const StepDiagnostics& diag,
                                  const LyapunovWeights& w, const Config& cfg,
                                  double t_k) {
  ResidualSample r;
  const int N = cfg.grid.cells;
  const double h = cfg.grid.h, tau = cfg.grid.tau;
  double wmin = std::numeric_limits<double>::infinity();
  double wmax = 0.0;
  double Vk = 0.0;
  for (int e = 1; e <= cfg.net.m; ++e) {
    const double v = cfg.net.velocity[e - 1];
    const double pe = w.p[e - 1], etae = w.eta[e - 1];
    double energy = 0.0;
    for (int j = 0; j < N; ++j) {
      const double f = state.flux[e - 1][j];
      const double weight = pe * std::exp(-etae * cell_center(e, j, cfg.net, cfg.grid));
      energy += f * f * weight;
      wmin = std::min(wmin, weight);
      wmax = std::max(wmax, weight);
    }
    r.S1 += v * (std::exp(-etae * h) - 1.0) * energy;
    Vk += energy * h;

    const BoundaryPair bc = boundary_coords_of(e, cfg);
    const double fin = state.ghost[e - 1];
    const double fout = state.flux[e - 1][N - 1];
    r.S2 += v * pe * (fin * fin * std::exp(-etae * bc.at_inflow) -
                      fout * fout * std::exp(-etae * bc.at_outflow));

    const double qw = w.c[e - 1] * std::exp(-w.eta_tilde[e - 1] * v * t_k);
    const double decay = std::exp(-w.eta_tilde[e - 1] * v * tau);
    const double q = state.queue[e - 1];
    const double d = diag.g_in[e - 1] - diag.g_out[e - 1];
    r.Z1 += q * q * qw * (decay - 1.0) / tau;
    r.Z2 += (2.0 * q * d + tau * d * d) * qw * decay;
    Vk += q * q * qw;
    wmin = std::min(wmin, qw);
    wmax = std::max(wmax, qw);
  }
  r.C_lower = wmin;
  r.C_upper = wmax;
  r.pass = (r.S2 + r.Z2) <= 1e-10 * std::max(1.0, Vk);
  return r;
}

ProofTerms proof_terms(const SimState& before, const SimState& after,
                       const LyapunovWeights& w, const Config& cfg, double t_k) {
  ProofTerms pt;
  const double tau = cfg.grid.tau;
  for (int e = 1; e <= cfg.net.m; ++e) {
    const double pe = w.p[e - 1], etae = w.eta[e - 1];
    for (int j = 0; j < cfg.grid.cells; ++j) {
      const double fb = before.flux[e - 1][j];
      const double fa = after.flux[e - 1][j];
      pt.C1 += (fa * fa - fb * fb) * pe *
               std::exp(-etae * cell_center(e, j, cfg.net, cfg.grid)) * cfg.grid.h / tau;
    }
    const double ve = cfg.net.velocity[e - 1];
    const double qb = before.queue[e - 1];
    const double qa = after.queue[e - 1];
    const double ce = w.c[e - 1], ete = w.eta_tilde[e - 1];
    pt.C2 += (qa * qa * ce * std::exp(-ete * ve * (t_k + tau)) -
              qb * qb * ce * std::exp(-ete * ve * t_k)) /
             tau;
  }
  return pt;
}

std::vector<DecayConvergenceRow> decay_convergence(const LyapunovWeights& w,
                                                   const NetworkSpec& net,
                                                   const std::vector<double>& h_list) {
  const double nu_cont = analytic_decay_rate(w, net);
  std::vector<DecayConvergenceRow> rows;
  rows.reserve(h_list.size());
  for (double h : h_list) {
    const double tau = h / net.max_velocity();  // CFL equality
    GridSpec grid = GridSpec::from_resolution(net.length, h, tau, tau);
    Config cfg = Config::validated(net, grid);
    DecayConvergenceRow row;
    row.h = h;
    row.nu = decay_rate(cfg, w).nu;
    row.error = std::abs(row.nu - nu_cont);
    row.ratio = rows.empty() ? 0.0 : row.error / rows.back().error;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace prodnet
