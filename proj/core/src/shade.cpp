// SHADE and L-SHADE: current-to-pbest/1/bin with success-history parameter
// adaptation, an external archive of replaced parents and (for L-SHADE)
// linear population size reduction.

#include <cmath>

#include "evolve_internal.hpp"

namespace odcal {

namespace detail {

namespace {

std::size_t archive_capacity(double rate, std::size_t n) {
  return static_cast<std::size_t>(std::lround(rate * static_cast<double>(n)));
}

std::vector<std::size_t> rank_by_fitness(const std::vector<double>& fit) {
  std::vector<std::size_t> order(fit.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });
  return order;
}

}  // namespace

OptimizeResult run_shade_core(const BatchObjective& objective, const Bounds& bounds,
                              const OptimizerConfig& config, const ShadeSettings& settings,
                              std::uint64_t seed) {
  config.validate();
  bounds.validate();
  if (settings.memory_size == 0) throw ConfigError("memory size must be positive");
  if (settings.min_population < 4 || settings.min_population > config.population)
    throw ConfigError("minimum population must lie in [4, population]");

  Rng rng(seed);
  BudgetedObjective eval(objective, config.budget);
  Tracker tracker;
  ShadeMemory memory(settings.memory_size);
  Archive archive;

  auto pop = initial_population(bounds, config, rng);
  const std::size_t n_init = pop.size();
  const std::size_t dim = bounds.dimension();
  auto fit = eval(pop);
  tracker.observe(pop, fit, n_init);
  tracker.record(eval.used(), fit, n_init);

  std::vector<Genome> trials;
  std::vector<double> trial_cr, trial_f;
  std::vector<double> s_cr, s_f, s_delta;
  while (eval.remaining() > 0) {
    const std::size_t n = pop.size();
    const std::size_t k = std::min(n, eval.remaining());
    const auto order = rank_by_fitness(fit);
    const std::size_t p_count = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::lround(config.pbest_fraction * static_cast<double>(n))), 2, n);

    trials.assign(k, Genome(dim));
    trial_cr.assign(k, 0.0);
    trial_f.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t slot = rng.below(memory.size());
      const double cr = std::clamp(rng.normal(memory.cr(slot), 0.1), 0.0, 1.0);
      double f;
      do {
        f = rng.cauchy(memory.f(slot), 0.1);
      } while (f <= 0.0);
      f = std::min(f, 1.0);

      const std::size_t pbest = order[rng.below(p_count)];
      const std::size_t r1 = pick_distinct(rng, n, i);
      const std::size_t r2 = pick_distinct(rng, n + archive.size(), i, r1);
      const Genome& x_r2 = r2 < n ? pop[r2] : archive[r2 - n];

      const std::size_t forced = rng.below(dim);
      Genome& u = trials[i];
      for (std::size_t d = 0; d < dim; ++d) {
        if (d == forced || rng.uniform() < cr)
          u[d] = pop[i][d] + f * (pop[pbest][d] - pop[i][d]) + f * (pop[r1][d] - x_r2[d]);
        else
          u[d] = pop[i][d];
      }
      repair(u, bounds);
      trial_cr[i] = cr;
      trial_f[i] = f;
    }

    const auto trial_fit = eval(trials);
    s_cr.clear();
    s_f.clear();
    s_delta.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if (trial_fit[i] > fit[i]) continue;
      if (trial_fit[i] < fit[i]) {
        archive.add(pop[i], archive_capacity(config.archive_rate, n), rng);
        s_cr.push_back(trial_cr[i]);
        s_f.push_back(trial_f[i]);
        s_delta.push_back(fit[i] - trial_fit[i]);
      }
      pop[i] = std::move(trials[i]);
      fit[i] = trial_fit[i];
    }
    memory.update(s_cr, s_f, s_delta);
    tracker.observe(pop, fit, n);

    if (settings.min_population < n_init) {
      const std::size_t target =
          std::max(settings.min_population,
                   lshade_target_size(n_init, settings.min_population, eval.used(), config.budget));
      if (target < pop.size()) {
        auto ranked = rank_by_fitness(fit);
        ranked.resize(target);
        std::sort(ranked.begin(), ranked.end());  // keep survivors in original order
        std::vector<Genome> next_pop;
        std::vector<double> next_fit;
        next_pop.reserve(target);
        next_fit.reserve(target);
        for (std::size_t idx : ranked) {
          next_pop.push_back(std::move(pop[idx]));
          next_fit.push_back(fit[idx]);
        }
        pop = std::move(next_pop);
        fit = std::move(next_fit);
        archive.shrink(archive_capacity(config.archive_rate, target), rng);
      }
    }
    tracker.record(eval.used(), fit, pop.size());
  }
  return tracker.finish(eval.used(), pop.size());
}

}  // namespace detail

OptimizeResult run_shade(const BatchObjective& objective, const Bounds& bounds,
                         const OptimizerConfig& config, std::uint64_t seed) {
  return detail::run_shade_core(objective, bounds, config,
                                {config.shade_memory, config.population}, seed);
}

OptimizeResult run_lshade(const BatchObjective& objective, const Bounds& bounds,
                          const OptimizerConfig& config, std::uint64_t seed) {
  return detail::run_shade_core(objective, bounds, config,
                                {config.lshade_memory, config.lshade_min_population}, seed);
}

}  // namespace odcal
