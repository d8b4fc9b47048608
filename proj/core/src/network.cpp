#include "prodnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace prodnet {

namespace {
constexpr double kRelTol = 1e-9;

bool near_integer(double x, long long& out) {
  const double r = std::round(x);
  out = static_cast<long long>(r);
  return std::abs(x - r) <= kRelTol * std::max(1.0, std::abs(x));
}
}  // namespace

double NetworkSpec::max_velocity() const {
  return *std::max_element(velocity.begin(), velocity.end());
}

double NetworkSpec::min_velocity() const {
  return *std::min_element(velocity.begin(), velocity.end());
}

GridSpec GridSpec::from_resolution(double l, double h, double tau, double T) {
  GridSpec g;
  g.h = h;
  g.tau = tau;
  g.horizon = T;
  long long n = 0;
  if (h > 0.0 && !near_integer(l / h, n)) {
    std::ostringstream os;
    os << "grid mismatch: l/h = " << l / h << " is not an integer (l=" << l
       << ", h=" << h << ")";
    throw ValidationError(os.str());
  }
  g.cells = static_cast<int>(n);
  long long k = 0;
  if (tau > 0.0 && !near_integer(T / tau, k)) {
    std::ostringstream os;
    os << "grid mismatch: T/tau = " << T / tau << " is not an integer (T=" << T
       << ", tau=" << tau << ")";
    throw ValidationError(os.str());
  }
  g.steps = static_cast<int>(k) + 1;  // (K-1)*tau = T
  return g;
}

double cfl_ratio(const NetworkSpec& net, const GridSpec& grid) {
  return net.max_velocity() * grid.tau / grid.h;
}

std::vector<ConfigIssue> validate_network(const NetworkSpec& net, const GridSpec& grid) {
  std::vector<ConfigIssue> issues;
  auto positive = [&](double v, const std::string& name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      issues.push_back({ConfigErrorKind::NonPositiveParameter,
                        name + " must be positive, got " + std::to_string(v)});
    }
  };

  if (net.m < 1) {
    issues.push_back({ConfigErrorKind::NonPositiveParameter,
                      "processor count m must be >= 1, got " + std::to_string(net.m)});
    return issues;
  }
  if (static_cast<int>(net.velocity.size()) != net.m ||
      static_cast<int>(net.capacity.size()) != net.m) {
    issues.push_back({ConfigErrorKind::NonPositiveParameter,
                      "velocity/capacity vectors must have m entries"});
    return issues;
  }
  for (int e = 1; e <= net.m; ++e) {
    positive(net.velocity[e - 1], "v_" + std::to_string(e));
    positive(net.capacity[e - 1], "mu_" + std::to_string(e));
  }
  positive(net.length, "l");
  positive(grid.h, "h");
  positive(grid.tau, "tau");
  positive(grid.horizon, "T");
  if (grid.cells < 1) {
    issues.push_back({ConfigErrorKind::GridMismatch,
                      "cell count N must be >= 1, got " + std::to_string(grid.cells)});
  }
  if (grid.steps < 2) {
    issues.push_back({ConfigErrorKind::GridMismatch,
                      "step count K must be >= 2, got " + std::to_string(grid.steps)});
  }
  if (!issues.empty()) return issues;

  const double nl = grid.cells * grid.h;
  if (std::abs(nl - net.length) > kRelTol * net.length) {
    std::ostringstream os;
    os << "grid mismatch: N*h = " << nl << " != l = " << net.length;
    issues.push_back({ConfigErrorKind::GridMismatch, os.str()});
  }
  const double kt = (grid.steps - 1) * grid.tau;
  if (std::abs(kt - grid.horizon) > kRelTol * grid.horizon) {
    std::ostringstream os;
    os << "grid mismatch: (K-1)*tau = " << kt << " != T = " << grid.horizon;
    issues.push_back({ConfigErrorKind::GridMismatch, os.str()});
  }
  const double cfl = cfl_ratio(net, grid);
  if (cfl > 1.0 + 1e-12) {
    std::ostringstream os;
    os << "CFL violation: max_e(v_e)*tau/h = " << cfl << " > 1";
    issues.push_back({ConfigErrorKind::CflViolation, os.str()});
  }
  return issues;
}

Config Config::validated(NetworkSpec net, GridSpec grid, BoundaryCoords coords) {
  auto issues = validate_network(net, grid);
  if (!issues.empty()) {
    std::ostringstream os;
    os << "invalid configuration:";
    for (const auto& i : issues) os << "\n  - " << i.detail;
    throw ValidationError(os.str());
  }
  Config cfg;
  cfg.net = std::move(net);
  cfg.grid = std::move(grid);
  cfg.boundary_coords = coords;
  return cfg;
}

double cell_center(int e, int j, const NetworkSpec& net, const GridSpec& grid) {
  if (e < 1 || e > net.m || j < 0 || j >= grid.cells) {
    throw IndexOutOfRange("cell_center: (e,j) = (" + std::to_string(e) + "," +
                          std::to_string(j) + ") out of range");
  }
  return (e - 1) * net.length + (j + 0.5) * grid.h;
}

double inflow_coord(int e, const NetworkSpec& net) {
  if (e < 1 || e > net.m) throw IndexOutOfRange("inflow_coord: e out of range");
  return (e - 1) * net.length;
}

double outflow_coord(int e, const NetworkSpec& net) {
  if (e < 1 || e > net.m) throw IndexOutOfRange("outflow_coord: e out of range");
  return e * net.length;
}

BoundaryPair boundary_coords_of(int e, const Config& cfg) {
  if (cfg.boundary_coords == BoundaryCoords::Interface) {
    return {inflow_coord(e, cfg.net), outflow_coord(e, cfg.net)};
  }
  return {cell_center(e, 0, cfg.net, cfg.grid),
          cell_center(e, cfg.grid.cells - 1, cfg.net, cfg.grid)};
}

}  // namespace prodnet
