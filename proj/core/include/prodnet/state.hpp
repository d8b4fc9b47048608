#ifndef PRODNET_STATE_HPP
#define PRODNET_STATE_HPP

#include <vector>

#include "prodnet/network.hpp"

namespace prodnet {

/// Discrete state at one time index: flux per processor per interior cell,
/// one ghost value per processor carrying the applied boundary inflow, and
/// the queue loads. Queues are kept nonnegative by the stepping clamp.
struct SimState {
  std::vector<std::vector<double>> flux;  // [m][N], f_{e,j}
  std::vector<double> ghost;              // [m], f_{e,-1}
  std::vector<double> queue;              // [m], q_e >= 0
  int k = 0;

  static SimState zero(const Config& cfg);
  /// Constant initial profile per processor, queues as given (q_1 must be 0).
  static SimState constant(const Config& cfg, const std::vector<double>& flux0,
                           const std::vector<double>& queue0);

  /// f_{e,N-1}, the outflow-side value of processor e (1-based).
  double outflow(int e) const { return flux[e - 1].back(); }
};

}  // namespace prodnet

#endif
