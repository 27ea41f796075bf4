#include <benchmark/benchmark.h>

#include "levyif/fluid_engine.hpp"
#include "levyif/levy_driver.hpp"
#include "levyif/spiking_network.hpp"
#include "levyif/stability_analysis.hpp"

using namespace levyif;

static void BM_SampleIncrement(benchmark::State& state) {
  LevySpec spec{1.0, 1.0, 2.0, Distribution::exponential(0.4)};
  RandomStream rs(1);
  Increment inc;
  for (auto _ : state) {
    sample_increment_into(spec, 0.01, rs, inc);
    benchmark::DoNotOptimize(inc.continuous);
  }
}
BENCHMARK(BM_SampleIncrement);

static void BM_SimulateSymmetric(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const NetworkConfig cfg = NetworkConfig::symmetric(n, {2.0}, {1.0}, 1.0, 0.5);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const SimRecord rec = simulate(cfg, Vec(n, 1.0), 100.0, 0.01, seed++);
    benchmark::DoNotOptimize(rec.eta_final.data());
  }
  state.SetItemsProcessed(state.iterations() * 10000 * int64_t(n));
}
BENCHMARK(BM_SimulateSymmetric)->Arg(1)->Arg(3)->Arg(8);

static void BM_FluidIntegrate(benchmark::State& state) {
  const std::size_t n = 8;
  Vec h(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 + 0.1 * double(i);
    h[i] = 2.0 * w[i] + 0.3 * double(i);
  }
  Mat b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = i == j ? h[i] : w[i];
  Vec phi0(n, 1.0 / double(n));
  for (auto _ : state) {
    const FluidTrajectory traj = integrate_fluid(phi0, b, Vec(n, 1.0), 100.0);
    benchmark::DoNotOptimize(traj.emptied_at);
  }
}
BENCHMARK(BM_FluidIntegrate);

static void BM_SubsetEnumeration(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  Mat b(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) b(i, i) = double(n) + 1.0;
  for (auto _ : state) {
    const StabilityReport report = check_partial_stability(b, Vec(n, 1.0));
    benchmark::DoNotOptimize(report.feasible);
  }
}
BENCHMARK(BM_SubsetEnumeration)->Arg(6)->Arg(10)->Arg(12);

BENCHMARK_MAIN();
