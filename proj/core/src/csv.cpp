#include "prodnet/csv.hpp"

#include <cstdio>
#include <fstream>

namespace prodnet {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {
std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}
}  // namespace

void write_trajectory_csv(const std::string& path, const RunResult& run, int m,
                          int stride) {
  auto out = open_out(path);
  out << "k,t,V,V1,V2,V_up,residual,verdict,u1";
  for (int e = 1; e <= m; ++e) out << ",q_" << e;
  for (int e = 1; e <= m; ++e) out << ",f_out_" << e;
  out << "\n";
  for (std::size_t i = 0; i < run.rows.size(); ++i) {
    if (i % stride != 0 && i + 1 != run.rows.size()) continue;
    const auto& r = run.rows[i];
    out << r.k << ',' << format_value(r.t) << ',' << format_value(r.V) << ','
        << format_value(r.V1) << ',' << format_value(r.V2) << ','
        << format_value(r.V_up) << ',' << format_value(r.residual) << ','
        << (r.verdict ? 1 : 0) << ',' << format_value(r.u1);
    for (double q : r.queues) out << ',' << format_value(q);
    for (double f : r.f_out) out << ',' << format_value(f);
    out << "\n";
  }
}

void write_convergence_csv(const std::string& path,
                           const std::vector<ConvergenceRow>& rows) {
  auto out = open_out(path);
  out << "N,h,nu,err_inf,rate_inf,err_l2,rate_l2\n";
  for (const auto& r : rows) {
    out << r.N << ',' << format_value(r.h) << ',' << format_value(r.nu) << ','
        << format_value(r.err_inf) << ',' << format_value(r.rate_inf) << ','
        << format_value(r.err_l2) << ',' << format_value(r.rate_l2) << "\n";
  }
}

void write_kappa_sweep_csv(const std::string& path,
                           const std::vector<KappaSweepRow>& rows) {
  auto out = open_out(path);
  out << "kappa,VT_over_V0,eta,eta_tilde,nu\n";
  for (const auto& r : rows) {
    out << format_value(r.kappa) << ',' << format_value(r.ratio) << ','
        << format_value(r.eta) << ',' << format_value(r.eta_tilde) << ','
        << format_value(r.nu) << "\n";
  }
}

void write_capacity_gap_csv(const std::string& path,
                            const std::vector<CapacityGapRow>& rows) {
  auto out = open_out(path);
  out << "mu1,law,kink,kink_at,early_u1,V0,VT\n";
  for (const auto& r : rows) {
    out << format_value(r.mu1) << ',' << r.law << ',' << format_value(r.kink) << ','
        << r.kink_at << ',' << format_value(r.early_u1) << ','
        << format_value(r.run.V0) << ',' << format_value(r.run.VT) << "\n";
  }
}

void write_plot_script(const std::string& path, const std::vector<std::string>& csv_paths) {
  auto out = open_out(path);
  out << "#!/usr/bin/env python3\n"
         "import csv, math, sys\n"
         "import matplotlib\n"
         "matplotlib.use('Agg')\n"
         "import matplotlib.pyplot as plt\n\n"
         "files = [\n";
  for (const auto& p : csv_paths) out << "    " << '"' << p << '"' << ",\n";
  out << "]\n\n"
         "fig, axes = plt.subplots(2, 2, figsize=(11, 7))\n"
         "for path in files:\n"
         "    with open(path) as fh:\n"
         "        rows = list(csv.DictReader(fh))\n"
         "    t = [float(r['t']) for r in rows]\n"
         "    V = [float(r['V']) for r in rows]\n"
         "    Vup = [float(r['V_up']) for r in rows]\n"
         "    u1 = [float(r['u1']) for r in rows]\n"
         "    qs = [k for k in rows[0] if k.startswith('q_')]\n"
         "    axes[0][0].plot(t, V, label=path + ' V')\n"
         "    axes[0][0].plot(t, Vup, '--', label=path + ' V_up')\n"
         "    axes[0][1].semilogy(t, [max(v, 1e-300) for v in V], label=path)\n"
         "    axes[1][0].plot(t, u1, label=path)\n"
         "    for q in qs[1:]:\n"
         "        axes[1][1].plot(t, [float(r[q]) for r in rows], label=path + ' ' + q)\n"
         "axes[0][0].set_title('Lyapunov function and upper bound')\n"
         "axes[0][1].set_title('log V')\n"
         "axes[1][0].set_title('feedback u1')\n"
         "axes[1][1].set_title('queues')\n"
         "for ax in axes.flat:\n"
         "    ax.legend(fontsize=6)\n"
         "    ax.set_xlabel('t')\n"
         "fig.tight_layout()\n"
         "name = sys.argv[1] if len(sys.argv) > 1 else 'plots.png'\n"
         "fig.savefig(name, dpi=150)\n"
         "print('wrote', name)\n";
}

}  // namespace prodnet
