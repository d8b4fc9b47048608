#ifndef PRODNET_CSV_HPP
#define PRODNET_CSV_HPP

#include <string>
#include <vector>

#include "prodnet/experiments.hpp"

namespace prodnet {

/// Trajectory schema: k,t,V,V1,V2,V_up,residual,verdict,u1,q_1..q_m,f_out_1..f_out_m.
/// Decimals carry 17 significant digits; rows are thinned by `stride`.
void write_trajectory_csv(const std::string& path, const RunResult& run, int m,
                          int stride = 1);

void write_convergence_csv(const std::string& path,
                           const std::vector<ConvergenceRow>& rows);

void write_kappa_sweep_csv(const std::string& path,
                           const std::vector<KappaSweepRow>& rows);

void write_capacity_gap_csv(const std::string& path,
                            const std::vector<CapacityGapRow>& rows);

/// Emits a matplotlib script that reads the given trajectory CSVs and draws
/// V/V_up (linear and log), the feedback, and the queues.
void write_plot_script(const std::string& path, const std::vector<std::string>& csv_paths);

std::string format_value(double v);  // 17 significant digits

}  // namespace prodnet

#endif
