#pragma once

// Shared plumbing for the optimizers: budget accounting, initialization and
// convergence logging.

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "odcal/error.hpp"
#include "odcal/evolve.hpp"

namespace odcal::detail {

class BudgetedObjective {
 public:
  BudgetedObjective(const BatchObjective& objective, std::size_t budget)
      : objective_(objective), budget_(budget) {}

  std::size_t used() const noexcept { return used_; }
  std::size_t remaining() const noexcept { return budget_ - used_; }

  std::vector<double> operator()(std::span<const Genome> batch) {
    if (batch.size() > remaining()) throw std::logic_error("evaluation budget exceeded");
    auto f = objective_(batch);
    if (f.size() != batch.size()) throw std::logic_error("objective returned wrong batch size");
    used_ += batch.size();
    return f;
  }

 private:
  const BatchObjective& objective_;
  std::size_t budget_;
  std::size_t used_ = 0;
};

inline std::vector<Genome> initial_population(const Bounds& bounds, const OptimizerConfig& config,
                                              Rng& rng) {
  std::vector<Genome> pop;
  if (!config.initial_population.empty()) {
    for (auto g : config.initial_population) {
      if (g.size() != bounds.dimension())
        throw ConfigError("initial genome has wrong dimension");
      repair(g, bounds);
      pop.push_back(std::move(g));
    }
    return pop;
  }
  pop.reserve(config.population);
  for (std::size_t i = 0; i < config.population; ++i) {
    Genome g(bounds.dimension());
    for (std::size_t d = 0; d < g.size(); ++d) g[d] = rng.uniform(bounds.lo[d], bounds.hi[d]);
    repair(g, bounds);
    pop.push_back(std::move(g));
  }
  return pop;
}

/// Tracks the best-so-far genome and appends log records.
class Tracker {
 public:
  void observe(const std::vector<Genome>& pop, const std::vector<double>& fit, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      if (fit[i] < best_fitness_ || best_.empty()) {
        best_fitness_ = fit[i];
        best_ = pop[i];
      }
    }
  }

  void record(std::size_t evaluations, const std::vector<double>& fit, std::size_t pop_size) {
    const double mean =
        std::accumulate(fit.begin(), fit.begin() + static_cast<std::ptrdiff_t>(pop_size), 0.0) /
        static_cast<double>(pop_size);
    log_.push_back({evaluations, best_fitness_, mean, pop_size});
  }

  OptimizeResult finish(std::size_t evaluations, std::size_t final_population) {
    return {std::move(best_), best_fitness_, std::move(log_), evaluations, final_population};
  }

 private:
  Genome best_;
  double best_fitness_ = std::numeric_limits<double>::infinity();
  ConvergenceLog log_;
};

/// Index in [0, n) different from every value in `excluded`.
template <typename... Ex>
std::size_t pick_distinct(Rng& rng, std::size_t n, Ex... excluded) {
  for (;;) {
    const std::size_t r = rng.below(n);
    if (((r != excluded) && ...)) return r;
  }
}

}  // namespace odcal::detail
