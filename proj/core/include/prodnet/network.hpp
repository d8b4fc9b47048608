#ifndef PRODNET_NETWORK_HPP
#define PRODNET_NETWORK_HPP

#include <string>
#include <vector>

#include "prodnet/errors.hpp"

namespace prodnet {

/// Serial production line: m processors, each a transport segment of uniform
/// length with its own speed and maximal throughput.
struct NetworkSpec {
  int m = 0;                      // processor count, >= 1
  std::vector<double> velocity;   // v_e > 0, size m
  std::vector<double> capacity;   // mu_e > 0, size m
  double length = 0.0;            // uniform processor length l > 0

  double max_velocity() const;
  double min_velocity() const;
};

/// Equidistant space-time grid shared by all processors.
struct GridSpec {
  double h = 0.0;     // space step
  double tau = 0.0;   // time step
  int cells = 0;      // N, interior cells per processor; N*h = l
  double horizon = 0.0;  // T
  int steps = 0;      // K, (K-1)*tau = T

  /// Derives N and K from (l, h, tau, T). N and K must come out integral;
  /// rounding would silently change grid-tied experiments.
  static GridSpec from_resolution(double l, double h, double tau, double T);
};

enum class BoundaryCoords {
  Interface,   // x_e^in = (e-1)l, x_e^out = e*l
  CellCenter,  // first/last cell centers
};

enum class ConfigErrorKind { NonPositiveParameter, GridMismatch, CflViolation };

struct ConfigIssue {
  ConfigErrorKind kind;
  std::string detail;
};

double cfl_ratio(const NetworkSpec& net, const GridSpec& grid);

/// Checks positivity, grid consistency and the CFL condition. Returns every
/// violated constraint; an empty vector means the pair is valid.
std::vector<ConfigIssue> validate_network(const NetworkSpec& net, const GridSpec& grid);

/// A network/grid pair that passed validate_network. Immutable after
/// construction and safe to share between concurrent runs.
struct Config {
  NetworkSpec net;
  GridSpec grid;
  BoundaryCoords boundary_coords = BoundaryCoords::Interface;

  /// Throws ValidationError listing all violations.
  static Config validated(NetworkSpec net, GridSpec grid,
                          BoundaryCoords coords = BoundaryCoords::Interface);
};

/// Cell center x_{e,j} = (e-1)l + (j+1/2)h on the concatenated line.
/// e is 1-based, j in {0,...,N-1}.
double cell_center(int e, int j, const NetworkSpec& net, const GridSpec& grid);

/// Interface coordinates of processor e: inflow (e-1)l, outflow e*l.
double inflow_coord(int e, const NetworkSpec& net);
double outflow_coord(int e, const NetworkSpec& net);

/// Coordinates used for the boundary terms of processor e under the chosen
/// convention: the pair (x_{e,0}, x_{e,N-1}).
struct BoundaryPair {
  double at_inflow;
  double at_outflow;
};
BoundaryPair boundary_coords_of(int e, const Config& cfg);

}  // namespace prodnet

#endif
