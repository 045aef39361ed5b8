// Global-best PSO with inertia weight and per-dimension velocity clamping to
// the variable's range. Velocities start at zero. A coordinate leaving its box
// is clamped and its velocity reflected with factor 0.5; without this the
// swarm can collapse onto a wall where every attraction term is zero.

#include "evolve_internal.hpp"

namespace odcal {

void detail::pso_move(Genome& pos, Genome& vel, const Genome& own_best, const Genome& swarm_best,
                      const Bounds& bounds, const OptimizerConfig& config, Rng& rng) {
  for (std::size_t d = 0; d < pos.size(); ++d) {
    const double range = bounds.hi[d] - bounds.lo[d];
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    const double v = config.pso_w * vel[d] + config.pso_c1 * r1 * (own_best[d] - pos[d]) +
                     config.pso_c2 * r2 * (swarm_best[d] - pos[d]);
    vel[d] = std::clamp(v, -range, range);
    pos[d] += vel[d];
    if (pos[d] < bounds.lo[d] || pos[d] > bounds.hi[d]) vel[d] *= -0.5;
  }
  repair(pos, bounds);
}

OptimizeResult run_pso(const BatchObjective& objective, const Bounds& bounds,
                       const OptimizerConfig& config, std::uint64_t seed) {
  config.validate();
  bounds.validate();
  Rng rng(seed);
  detail::BudgetedObjective eval(objective, config.budget);
  detail::Tracker tracker;

  auto pos = detail::initial_population(bounds, config, rng);
  const std::size_t n = pos.size();
  std::vector<Genome> vel(n, Genome(bounds.dimension(), 0.0));
  auto fit = eval(pos);
  auto pbest = pos;
  auto pbest_fit = fit;
  tracker.observe(pos, fit, n);
  tracker.record(eval.used(), fit, n);

  auto global_best = [&] {
    return static_cast<std::size_t>(
        std::min_element(pbest_fit.begin(), pbest_fit.end()) - pbest_fit.begin());
  };
  std::size_t g = global_best();

  std::vector<Genome> moved;
  while (eval.remaining() > 0) {
    const std::size_t k = std::min(n, eval.remaining());
    for (std::size_t i = 0; i < k; ++i)
      detail::pso_move(pos[i], vel[i], pbest[i], pbest[g], bounds, config, rng);
    moved.assign(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(k));
    const auto moved_fit = eval(moved);
    for (std::size_t i = 0; i < k; ++i) {
      fit[i] = moved_fit[i];
      if (fit[i] < pbest_fit[i]) {
        pbest_fit[i] = fit[i];
        pbest[i] = pos[i];
      }
    }
    g = global_best();
    tracker.observe(pos, fit, k);
    tracker.record(eval.used(), fit, n);
  }
  return tracker.finish(eval.used(), n);
}

}  // namespace odcal
