#include <benchmark/benchmark.h>

#include "odcal/evolve.hpp"
#include "odcal/problem.hpp"

using namespace odcal;

namespace {

// Optimizer overhead with a trivial objective on the 45-D ATBCR genome.
void BM_Optimizer(benchmark::State& state) {
  const auto bounds = bounds_for(Model::ATBCR, 15);
  const auto objective = batch([](const Genome& g) {
    double s = 0.0;
    for (double v : g) s += v * v;
    return s;
  });
  OptimizerConfig cfg;
  cfg.algorithm = static_cast<Algorithm>(state.range(0));
  cfg.budget = 10'000;
  state.SetLabel(std::string(to_string(cfg.algorithm)));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(optimize(objective, bounds, cfg, ++seed));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.budget));
}
BENCHMARK(BM_Optimizer)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Repair(benchmark::State& state) {
  const auto bounds = bounds_for(Model::ATBCR, 15);
  Rng rng(1);
  Genome g(45);
  for (auto _ : state) {
    for (auto& v : g) v = rng.uniform(-0.2, 1.2);
    repair(g, bounds);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_Repair);

}  // namespace
