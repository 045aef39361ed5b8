// DE/rand/1/bin.

#include "evolve_internal.hpp"

namespace odcal {

OptimizeResult run_de(const BatchObjective& objective, const Bounds& bounds,
                      const OptimizerConfig& config, std::uint64_t seed) {
  config.validate();
  bounds.validate();
  Rng rng(seed);
  detail::BudgetedObjective eval(objective, config.budget);
  detail::Tracker tracker;

  auto pop = detail::initial_population(bounds, config, rng);
  const std::size_t n = pop.size();
  const std::size_t dim = bounds.dimension();
  auto fit = eval(pop);
  tracker.observe(pop, fit, n);
  tracker.record(eval.used(), fit, n);

  std::vector<Genome> trials;
  while (eval.remaining() > 0) {
    const std::size_t k = std::min(n, eval.remaining());
    trials.assign(k, Genome(dim));
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t r1 = detail::pick_distinct(rng, n, i);
      const std::size_t r2 = detail::pick_distinct(rng, n, i, r1);
      const std::size_t r3 = detail::pick_distinct(rng, n, i, r1, r2);
      const std::size_t forced = rng.below(dim);
      Genome& u = trials[i];
      for (std::size_t d = 0; d < dim; ++d) {
        if (d == forced || rng.uniform() < config.de_cr)
          u[d] = pop[r1][d] + config.de_f * (pop[r2][d] - pop[r3][d]);
        else
          u[d] = pop[i][d];
      }
      repair(u, bounds);
    }
    const auto trial_fit = eval(trials);
    for (std::size_t i = 0; i < k; ++i) {
      if (trial_fit[i] <= fit[i]) {
        pop[i] = std::move(trials[i]);
        fit[i] = trial_fit[i];
      }
    }
    tracker.observe(pop, fit, n);
    tracker.record(eval.used(), fit, n);
  }
  return tracker.finish(eval.used(), n);
}

}  // namespace odcal
