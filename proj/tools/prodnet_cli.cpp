// Command-line front end: scenario simulation, the decay-rate convergence
// study, the gain sweep, the stability monitor, and scenario import/export.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prodnet/config_file.hpp"
#include "prodnet/csv.hpp"
#include "prodnet/experiments.hpp"

namespace fs = std::filesystem;
using namespace prodnet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

fs::path output_dir() {
  if (const char* dir = std::getenv("PRODNET_OUTPUT_DIR")) return fs::path(dir);
  return fs::current_path();
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == '/' || c == ' ') c = '_';
  }
  return s;
}

void print_warnings(const Scenario& sc) {
  for (const auto& w : sc.warnings()) std::cerr << "warning: " << w << "\n";
}

int cmd_simulate(const std::string& config_path) {
  Scenario sc = parse_config(config_path);
  print_warnings(sc);
  RunResult run = run_scenario(sc, fs::path(config_path).stem().string());
  const fs::path csv = output_dir() / (sanitize(run.label) + ".csv");
  write_trajectory_csv(csv.string(), run, sc.config.net.m, sc.output_stride);
  const fs::path plot = output_dir() / (sanitize(run.label) + "_plot.py");
  write_plot_script(plot.string(), {csv.string()});
  std::cout << "wrote " << csv.string() << "\n";
  std::cout << "wrote " << plot.string() << "\n";
  std::cout << "V0 = " << format_value(run.V0) << "  VT = " << format_value(run.VT)
            << "  nu = " << format_value(run.rate.nu)
            << "  residuals " << (run.all_residuals_pass ? "pass" : "fail") << "\n";
  return kExitOk;
}

int cmd_scenario(const std::string& name) {
  auto runs = run_builtin(name);
  std::vector<std::string> csvs;
  for (const auto& run : runs) {
    const fs::path csv = output_dir() / (sanitize(run.label) + ".csv");
    int m = static_cast<int>(run.rows.front().queues.size());
    write_trajectory_csv(csv.string(), run, m);
    csvs.push_back(csv.string());
    std::cout << "wrote " << csv.string() << "  (V0 = " << format_value(run.V0)
              << ", VT = " << format_value(run.VT) << ", max increment = "
              << format_value(run.max_increment) << ")\n";
  }
  const fs::path plot = output_dir() / (sanitize(name) + "_plot.py");
  write_plot_script(plot.string(), csvs);
  std::cout << "wrote " << plot.string() << "\n";
  return kExitOk;
}

int cmd_export(const std::string& name) {
  for (const auto& sc : builtin_scenarios(name)) {
    const fs::path path = output_dir() / (sanitize(sc.name) + ".cfg");
    std::ofstream out(path);
    out << export_scenario(sc);
    std::cout << "wrote " << path.string() << "\n";
  }
  return kExitOk;
}

int cmd_converge(double v) {
  auto rows = convergence_study(v, {10, 50, 100, 200, 400, 800});
  const fs::path csv = output_dir() / ("convergence_v" + sanitize(std::to_string(v)) + ".csv");
  write_convergence_csv(csv.string(), rows);
  std::cout << "wrote " << csv.string() << "\n";
  for (const auto& r : rows) {
    std::cout << "N=" << r.N << "  nu=" << format_value(r.nu)
              << "  err_inf=" << format_value(r.err_inf)
              << "  err_l2=" << format_value(r.err_l2) << "\n";
  }
  return kExitOk;
}

int cmd_sweep(const std::vector<double>& kappas) {
  auto rows = kappa_sweep(kappas);
  const fs::path csv = output_dir() / "kappa_sweep.csv";
  write_kappa_sweep_csv(csv.string(), rows);
  std::cout << "wrote " << csv.string() << "\n";
  for (const auto& r : rows) {
    std::cout << "kappa=" << r.kappa << "  VT/V0=" << format_value(r.ratio)
              << "  eta=" << format_value(r.eta) << "  nu=" << format_value(r.nu) << "\n";
  }
  return kExitOk;
}

int cmd_check_stability(const std::string& config_path) {
  Scenario sc = parse_config(config_path);
  print_warnings(sc);
  RunResult run = run_scenario(sc, fs::path(config_path).stem().string());
  if (run.all_residuals_pass) {
    std::cout << "stability inequality holds at every step (K = "
              << run.rows.size() << ")\n";
    return kExitOk;
  }
  std::cout << "stability inequality fails first at k = " << run.first_failing_k
            << " (t = " << format_value(run.first_failing_k * sc.config.grid.tau)
            << ")\n";
  return kExitValidation;
}

int cmd_selftest() {
  OracleReport report = oracle_smallcase();
  if (report.pass) {
    std::cout << "oracle small case: engine matches step-by-step reference\n";
    return kExitOk;
  }
  std::cerr << "oracle mismatch: " << report.first_mismatch << "\n";
  return kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial production line simulator with Lyapunov feedback stabilization"};
  app.require_subcommand(1);

  std::string config_path, scenario_name;
  double velocity = 1.0;
  std::vector<double> kappas = {0.1, 0.25, 0.5, 0.75};

  auto* sim = app.add_subcommand("simulate", "run a scenario config and write the trajectory CSV");
  sim->add_option("config", config_path, "scenario config file")->required();

  auto* conv = app.add_subcommand("converge", "decay-rate convergence table over grid refinement");
  conv->add_option("--v", velocity, "uniform processor velocity");

  auto* sweep = app.add_subcommand("sweep-kappa", "Lyapunov decay versus feedback gain");
  sweep->add_option("--kappas", kappas, "gain values in (0,1)");

  auto* check = app.add_subcommand("check-stability", "verify the per-step stability inequality");
  check->add_option("config", config_path, "scenario config file")->required();

  auto* scen = app.add_subcommand("scenario", "run a builtin scenario");
  scen->add_option("name", scenario_name, "builtin scenario name")->required();

  auto* exp = app.add_subcommand("export-scenario", "write a builtin scenario as an editable config");
  exp->add_option("name", scenario_name, "builtin scenario name")->required();

  app.add_subcommand("selftest", "compare the engine against the straight-line oracle");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(config_path);
    if (conv->parsed()) return cmd_converge(velocity);
    if (sweep->parsed()) return cmd_sweep(kappas);
    if (check->parsed()) return cmd_check_stability(config_path);
    if (scen->parsed()) return cmd_scenario(scenario_name);
    if (exp->parsed()) return cmd_export(scenario_name);
    return cmd_selftest();
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const UnknownScenario& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NonFiniteState& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
