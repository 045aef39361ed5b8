#include "odcal/evolve.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "odcal/error.hpp"

namespace odcal {

void Bounds::validate() const {
  if (lo.size() != hi.size()) throw ConfigError("bounds: lo/hi dimension mismatch");
  for (std::size_t d = 0; d < lo.size(); ++d)
    if (!(lo[d] <= hi[d])) throw ConfigError("bounds: lo > hi in dimension " + std::to_string(d));
  for (const auto& p : pairs) {
    if (p.lower >= lo.size() || p.upper >= lo.size() || p.lower == p.upper)
      throw ConfigError("pair constraint references invalid dimensions");
    if (!(p.min_gap <= p.max_gap)) throw ConfigError("pair constraint min_gap > max_gap");
    if (hi[p.upper] - lo[p.lower] < p.min_gap || lo[p.upper] - hi[p.lower] > p.max_gap)
      throw ConfigError("pair constraint infeasible within bounds");
  }
}

bool Bounds::feasible(std::span<const double> g) const noexcept {
  if (g.size() != lo.size()) return false;
  for (std::size_t d = 0; d < g.size(); ++d)
    if (!(g[d] >= lo[d] && g[d] <= hi[d])) return false;
  for (const auto& p : pairs) {
    const double gap = g[p.upper] - g[p.lower];
    if (gap < p.min_gap || gap > p.max_gap) return false;
  }
  return true;
}

void repair(std::span<double> g, const Bounds& bounds) {
  constexpr double up = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < g.size(); ++d) {
    if (std::isnan(g[d])) g[d] = bounds.lo[d];
    g[d] = std::clamp(g[d], bounds.lo[d], bounds.hi[d]);
  }
  for (const auto& p : bounds.pairs) {
    double& x = g[p.lower];
    double& y = g[p.upper];
    const double x_lo = bounds.lo[p.lower], x_hi = bounds.hi[p.lower];
    const double y_lo = bounds.lo[p.upper], y_hi = bounds.hi[p.upper];
    // The ulp loops absorb rounding in x + gap so the check holds exactly.
    if (y - x < p.min_gap) {
      y = std::min(x + p.min_gap, y_hi);
      while (y - x < p.min_gap && y < y_hi) y = std::nextafter(y, up);
      if (y - x < p.min_gap) {
        x = std::max(y - p.min_gap, x_lo);
        while (y - x < p.min_gap && x > x_lo) x = std::nextafter(x, -up);
      }
    } else if (y - x > p.max_gap) {
      y = std::max(x + p.max_gap, y_lo);
      while (y - x > p.max_gap && y > y_lo) y = std::nextafter(y, -up);
      if (y - x > p.max_gap) {
        x = std::min(y - p.max_gap, x_hi);
        while (y - x > p.max_gap && x < x_hi) x = std::nextafter(x, up);
      }
    }
  }
}

Genome repaired(Genome genome, const Bounds& bounds) {
  repair(genome, bounds);
  return genome;
}

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::DE:
      return "DE";
    case Algorithm::SHADE:
      return "SHADE";
    case Algorithm::LSHADE:
      return "LSHADE";
    case Algorithm::PSO:
      return "PSO";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view name) {
  std::string upper;
  for (char c : name)
    if (c != '-' && c != '_') upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "DE") return Algorithm::DE;
  if (upper == "SHADE") return Algorithm::SHADE;
  if (upper == "LSHADE") return Algorithm::LSHADE;
  if (upper == "PSO") return Algorithm::PSO;
  throw ConfigError("unknown algorithm '" + std::string(name) +
                    "' (expected DE, SHADE, LSHADE or PSO)");
}

void OptimizerConfig::validate() const {
  if (population < 4) throw ConfigError("population must be at least 4");
  if (budget < population)
    throw ConfigError("evaluation budget " + std::to_string(budget) +
                      " is smaller than one generation (" + std::to_string(population) + ")");
  if (!initial_population.empty() && initial_population.size() != population)
    throw ConfigError("initial population size does not match population");
  if (!(de_cr >= 0.0 && de_cr <= 1.0)) throw ConfigError("DE crossover rate must lie in [0,1]");
  if (!(de_f > 0.0)) throw ConfigError("DE scaling factor must be positive");
  if (shade_memory == 0 || lshade_memory == 0) throw ConfigError("memory size must be positive");
  if (lshade_min_population < 4 || lshade_min_population > population)
    throw ConfigError("L-SHADE minimum population must lie in [4, population]");
  if (!(pbest_fraction > 0.0 && pbest_fraction <= 1.0))
    throw ConfigError("p-best fraction must lie in (0,1]");
  if (!(archive_rate >= 0.0)) throw ConfigError("archive rate must be non-negative");
}

BatchObjective batch(std::function<double(const Genome&)> fn) {
  return [fn = std::move(fn)](std::span<const Genome> genomes) {
    std::vector<double> out;
    out.reserve(genomes.size());
    for (const auto& g : genomes) out.push_back(fn(g));
    return out;
  };
}

std::size_t lshade_target_size(std::size_t n_init, std::size_t n_min, std::size_t used,
                               std::size_t budget) noexcept {
  const double frac = budget == 0 ? 1.0 : std::min(1.0, static_cast<double>(used) / budget);
  const double target =
      static_cast<double>(n_init) - static_cast<double>(n_init - n_min) * frac;
  return static_cast<std::size_t>(std::lround(target));
}

OptimizeResult optimize(const BatchObjective& objective, const Bounds& bounds,
                        const OptimizerConfig& config, std::uint64_t seed) {
  switch (config.algorithm) {
    case Algorithm::DE:
      return run_de(objective, bounds, config, seed);
    case Algorithm::SHADE:
      return run_shade(objective, bounds, config, seed);
    case Algorithm::LSHADE:
      return run_lshade(objective, bounds, config, seed);
    case Algorithm::PSO:
      return run_pso(objective, bounds, config, seed);
  }
  throw ConfigError("unknown algorithm");
}

namespace detail {

ShadeMemory::ShadeMemory(std::size_t size) : cr_(size, 0.5), f_(size, 0.5) {}

void ShadeMemory::update(std::span<const double> s_cr, std::span<const double> s_f,
                         std::span<const double> improvement) {
  if (s_cr.empty()) return;
  double total = 0.0;
  for (double w : improvement) total += w;
  double cr = 0.0, f_num = 0.0, f_den = 0.0;
  for (std::size_t k = 0; k < s_cr.size(); ++k) {
    const double w = total > 0.0 ? improvement[k] / total : 1.0 / static_cast<double>(s_cr.size());
    cr += w * s_cr[k];
    f_num += w * s_f[k] * s_f[k];
    f_den += w * s_f[k];
  }
  cr_[next_] = cr;
  f_[next_] = f_den > 0.0 ? f_num / f_den : f_[next_];
  next_ = (next_ + 1) % cr_.size();
}

void Archive::add(const Genome& g, std::size_t capacity, Rng& rng) {
  if (capacity == 0) return;
  items_.push_back(g);
  shrink(capacity, rng);
}

void Archive::shrink(std::size_t capacity, Rng& rng) {
  while (items_.size() > capacity) {
    const std::size_t victim = rng.below(items_.size());
    items_[victim] = std::move(items_.back());
    items_.pop_back();
  }
}

}  // namespace detail

}  // namespace odcal
