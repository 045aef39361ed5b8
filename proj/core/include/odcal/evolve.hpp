#pragma once

// Population-based optimizers for bounded, pair-constrained real genomes.
// All of them minimize, evaluate whole generations through a batch objective
// and draw every random number from one sequential stream, so a fixed seed
// reproduces the run regardless of how the objective parallelizes.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "odcal/rng.hpp"

namespace odcal {

using Genome = std::vector<double>;

/// min_gap <= v[upper] - v[lower] <= max_gap.
struct PairConstraint {
  std::size_t lower;
  std::size_t upper;
  double min_gap;
  double max_gap;
};

struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<PairConstraint> pairs;

  std::size_t dimension() const noexcept { return lo.size(); }

  /// Throws ConfigError when a box is inverted or a pair constraint cannot
  /// be met inside the boxes.
  void validate() const;

  /// Exact check (no tolerance) of boxes and pair constraints.
  bool feasible(std::span<const double> genome) const noexcept;
};

/// Clamp to the boxes, then move the upper member of each violated pair
/// (falling back to the lower member when the upper one hits its bound).
/// The result satisfies `bounds.feasible` exactly in floating point.
void repair(std::span<double> genome, const Bounds& bounds);
Genome repaired(Genome genome, const Bounds& bounds);

enum class Algorithm { DE, SHADE, LSHADE, PSO };

std::string_view to_string(Algorithm algorithm) noexcept;
/// Accepts DE, SHADE, LSHADE / L-SHADE, PSO (case-insensitive).
Algorithm parse_algorithm(std::string_view name);

struct OptimizerConfig {
  Algorithm algorithm = Algorithm::DE;
  std::size_t population = 100;
  std::size_t budget = 30'000;

  double de_cr = 0.5;
  double de_f = 0.5;

  std::size_t shade_memory = 100;
  std::size_t lshade_memory = 6;
  std::size_t lshade_min_population = 4;
  double pbest_fraction = 0.1;
  double archive_rate = 1.0;  // archive capacity = rate * current population

  double pso_c1 = 1.49618;
  double pso_c2 = 1.49618;
  double pso_w = 0.7298;

  /// Replaces the uniform initial population when non-empty (must hold
  /// exactly `population` genomes; they are repaired before use).
  std::vector<Genome> initial_population;

  /// Throws ConfigError for population < 4 or budget < population.
  void validate() const;
};

struct ConvergenceRecord {
  std::size_t evaluations;
  double best;
  double mean;
  std::size_t population;
};

using ConvergenceLog = std::vector<ConvergenceRecord>;

struct OptimizeResult {
  Genome best;
  double best_fitness = 0.0;
  ConvergenceLog log;
  std::size_t evaluations = 0;
  std::size_t final_population = 0;
};

/// Scores a batch of genomes; returns one fitness per genome, in order.
using BatchObjective = std::function<std::vector<double>(std::span<const Genome>)>;

/// Wraps a per-genome function as a sequential batch objective.
BatchObjective batch(std::function<double(const Genome&)> fn);

OptimizeResult run_de(const BatchObjective& objective, const Bounds& bounds,
                      const OptimizerConfig& config, std::uint64_t seed);

/// SHADE with memory size config.shade_memory and a fixed population.
OptimizeResult run_shade(const BatchObjective& objective, const Bounds& bounds,
                         const OptimizerConfig& config, std::uint64_t seed);

/// SHADE with memory size config.lshade_memory and linear population
/// reduction down to config.lshade_min_population at budget exhaustion.
OptimizeResult run_lshade(const BatchObjective& objective, const Bounds& bounds,
                          const OptimizerConfig& config, std::uint64_t seed);

OptimizeResult run_pso(const BatchObjective& objective, const Bounds& bounds,
                       const OptimizerConfig& config, std::uint64_t seed);

/// Dispatches on config.algorithm.
OptimizeResult optimize(const BatchObjective& objective, const Bounds& bounds,
                        const OptimizerConfig& config, std::uint64_t seed);

/// Linear population reduction schedule: round(n_init - (n_init - n_min) * used / budget).
std::size_t lshade_target_size(std::size_t n_init, std::size_t n_min, std::size_t used,
                               std::size_t budget) noexcept;

namespace detail {

/// Success-history adaptive DE core shared by SHADE and L-SHADE.
/// Exposed so tests can run it with arbitrary memory size and floor.
struct ShadeSettings {
  std::size_t memory_size;
  std::size_t min_population;
};

OptimizeResult run_shade_core(const BatchObjective& objective, const Bounds& bounds,
                              const OptimizerConfig& config, const ShadeSettings& settings,
                              std::uint64_t seed);

/// Historical parameter memory of SHADE.
class ShadeMemory {
 public:
  explicit ShadeMemory(std::size_t size);

  std::size_t size() const noexcept { return cr_.size(); }
  double cr(std::size_t k) const noexcept { return cr_[k]; }
  double f(std::size_t k) const noexcept { return f_[k]; }

  /// Weighted arithmetic mean of successful CR and weighted Lehmer mean of
  /// successful F into the next slot; weights are fitness improvements. No
  /// change (and no slot advance) on an empty success set.
  void update(std::span<const double> s_cr, std::span<const double> s_f,
              std::span<const double> improvement);

 private:
  std::vector<double> cr_;
  std::vector<double> f_;
  std::size_t next_ = 0;
};

/// One PSO particle move: velocity update clamped to +-(hi - lo) per
/// dimension, position step, wall reflection, then repair.
void pso_move(Genome& pos, Genome& vel, const Genome& own_best, const Genome& swarm_best,
              const Bounds& bounds, const OptimizerConfig& config, Rng& rng);

/// Bounded external archive; random eviction on overflow.
class Archive {
 public:
  void add(const Genome& g, std::size_t capacity, Rng& rng);
  void shrink(std::size_t capacity, Rng& rng);
  std::size_t size() const noexcept { return items_.size(); }
  const Genome& operator[](std::size_t i) const noexcept { return items_[i]; }

 private:
  std::vector<Genome> items_;
};

}  // namespace detail

}  // namespace odcal
