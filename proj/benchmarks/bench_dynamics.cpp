#include <benchmark/benchmark.h>

#include <memory>

#include "odcal/fitness.hpp"

using namespace odcal;

namespace {

std::vector<double> uniform_profile(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.uniform();
  return x;
}

void BM_GenerateBa(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate_ba(n, 3, ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateBa)->Arg(500)->Arg(3961);

template <class Params>
void BM_Period(benchmark::State& state, Params params) {
  const auto g = generate_ba(3961, 3, 1);
  const auto base = uniform_profile(g.size(), 2);
  Rng rng(3);
  constexpr std::size_t steps = 13'500;
  for (auto _ : state) {
    auto x = base;
    simulate_period(params, x, base, g, steps, rng);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(steps));
}
BENCHMARK_CAPTURE(BM_Period, fj, PeriodParams{FjParams{0.5}});
BENCHMARK_CAPTURE(BM_Period, dw, PeriodParams{DwParams{0.3, 0.2}});
BENCHMARK_CAPTURE(BM_Period, atbcr, PeriodParams{AtbcrParams{0.3, 0.2, 0.6}});

// One full-scale fitness evaluation: 15 periods x 13,500 steps, N = 3,961.
void BM_Evaluate(benchmark::State& state) {
  CalibrationProblem p;
  p.model = Model::ATBCR;
  p.survey = synth_dataset(3961, 0.1, 0.08, 0.06, 1);
  p.network = std::make_shared<const SocialNetwork>(generate_ba(3961, 3, 2));
  for (int k = 0; k < 15; ++k) p.targets.points.push_back({"m" + std::to_string(k), 0.25});
  const auto replicates = static_cast<std::size_t>(state.range(0));
  Genome g;
  for (int k = 0; k < 15; ++k) g.insert(g.end(), {0.2, 0.1, 0.7});
  std::uint64_t tag = 0;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(g, p, replicates, 7, ++tag));
}
BENCHMARK(BM_Evaluate)->Arg(1)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
