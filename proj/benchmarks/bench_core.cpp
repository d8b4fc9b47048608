#include <benchmark/benchmark.h>

#include "prodnet/experiments.hpp"

using namespace prodnet;

namespace {

Config bench_config(int N, double T) {
  const double h = 0.5 / N;
  NetworkSpec net{2, {1.0, 1.0}, {6.0, 4.0}, 0.5};
  return Config::validated(net, GridSpec::from_resolution(0.5, h, h, T));
}

void BM_step(benchmark::State& state) {
  Config cfg = bench_config(static_cast<int>(state.range(0)), 1.0);
  SimState s = SimState::constant(cfg, {4.0, 4.0}, {0.0, 1.0});
  for (auto _ : state) {
    s = step(s, 2.0, cfg);
    benchmark::DoNotOptimize(s.flux[0].data());
  }
  state.SetItemsProcessed(state.iterations() * 2 * cfg.grid.cells);
}
BENCHMARK(BM_step)->Arg(50)->Arg(400)->Arg(800);

void BM_energy(benchmark::State& state) {
  Config cfg = bench_config(static_cast<int>(state.range(0)), 1.0);
  SimState s = SimState::constant(cfg, {4.0, 4.0}, {0.0, 1.0});
  LyapunovWeights w = LyapunovWeights::uniform(2, 1.0, 0.5, 1.0, 0.5);
  for (auto _ : state) {
    auto sample = discrete_V(s, w, cfg, 0.5);
    benchmark::DoNotOptimize(sample.V);
  }
}
BENCHMARK(BM_energy)->Arg(50)->Arg(400)->Arg(800);

void BM_closed_loop_run(benchmark::State& state) {
  Config cfg = bench_config(50, 5.0);
  LyapunovWeights w = LyapunovWeights::uniform(2, 1.0, 0.5, 1.0, 0.5);
  SimState init = SimState::constant(cfg, {4.0, 4.0}, {0.0, 1.0});
  auto policy = make_policy(MixedLaw{kappa_bound(0.5, 0.5)}, w, cfg);
  for (auto _ : state) {
    SimState end = simulate(cfg, init, policy);
    benchmark::DoNotOptimize(end.queue.data());
  }
  state.SetItemsProcessed(state.iterations() * cfg.grid.steps);
}
BENCHMARK(BM_closed_loop_run);

}  // namespace

BENCHMARK_MAIN();
