#ifndef PRODNET_CONFIG_FILE_HPP
#define PRODNET_CONFIG_FILE_HPP

#include <iosfwd>
#include <string>

#include "prodnet/experiments.hpp"

namespace prodnet {

/// Parses the line-oriented scenario format:
///
///   [network]
///   m = 2
///   v = 1 1        # one value broadcasts to all processors
///   mu = 6 4
///   l = 0.5
///
///   [grid]
///   h = 0.01
///   tau = 0.01     # or: cfl = 1   (tau = cfl * h / max v)
///   T = 30
///
///   [initial]
///   flux = 4 4     # constants; flux_table_<e> = per-cell values overrides
///   queues = 0 1
///
///   [lyapunov]
///   p = 1
///   eta = 0.5
///   c = 1
///   eta_tilde = 0.5
///   boundary_coords = interface   # or cell-center
///
///   [feedback]
///   kind = mixed   # open-loop | linear | mixed
///   kappa = 0.7788
///   epsilon = 1e-6
///   inflow = 0     # open-loop constant; inflow_table = per-step values
///
///   [output]
///   stride = 1
///
/// Unknown sections or keys are errors (with a nearest-key suggestion);
/// ParseError carries line provenance. Validation delegates to
/// validate_network and reports every violation.
Scenario parse_config(const std::string& path);
Scenario parse_config_text(const std::string& text, const std::string& origin = "<string>");

/// Serializes a scenario back to the config format; re-parsing yields an
/// equivalent scenario. Open-loop profiles are exported as step tables.
std::string export_scenario(const Scenario& sc);

}  // namespace prodnet

#endif
