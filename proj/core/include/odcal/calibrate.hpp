#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "odcal/evolve.hpp"
#include "odcal/fitness.hpp"
#include "odcal/problem.hpp"

namespace odcal {

struct CalibrationOptions {
  std::size_t threads = 1;
  /// Fresh replicates used to re-score the best genome after the search.
  std::size_t reevaluation_replicates = 20;
  /// Called with every genome right before it is scored, in evaluation order.
  std::function<void(std::span<const double>)> on_evaluate;
};

/// All streams of a run derive from `master`:
/// optimizer = mix_seed(master, 1), search = mix_seed(master, 2),
/// reevaluation = mix_seed(master, 3).
struct CalibrationSeeds {
  std::uint64_t master = 0;
  std::uint64_t optimizer = 0;
  std::uint64_t search = 0;
  std::uint64_t reevaluation = 0;

  static CalibrationSeeds derive(std::uint64_t master) noexcept;
};

struct CalibrationResult {
  Model model = Model::ATBCR;
  Algorithm algorithm = Algorithm::DE;
  Genome best;
  ParameterSchedule schedule;
  double search_fitness = 0.0;       // fitness seen by the optimizer
  std::uint64_t best_tag = 0;        // evaluation index that produced it
  FitnessValue reevaluated;          // best genome on fresh replicates
  ConvergenceLog log;
  std::size_t evaluations = 0;
  std::size_t final_population = 0;
  CalibrationSeeds seeds;
  std::vector<std::string> period_labels;
};

/// Optimizes `problem` with `config`. Evaluation i of the search uses
/// replicate streams replicate_seed(seeds.search, i, r).
CalibrationResult run_calibration(const CalibrationProblem& problem, const OptimizerConfig& config,
                                  std::uint64_t master_seed, const CalibrationOptions& options = {});

/// Parameter names in genome order for one period of `model`.
std::vector<std::string> parameter_names(Model model);

/// "period,param,value", one row per period and parameter.
void write_best_params(const ParameterSchedule& schedule, const std::vector<std::string>& labels,
                       const std::filesystem::path& path);

struct ParamsFile {
  std::vector<std::string> labels;
  Model model;
  Genome genome;  // period-major
};

/// Reads the "period,param,value" format back. Throws ParseError on unknown
/// parameters, mixed models or incomplete periods.
ParamsFile read_params(const std::filesystem::path& path);

/// "period,simulated,target"; target empty when missing.
void write_concern(std::span<const double> simulated, const TargetSeries& targets,
                   const std::filesystem::path& path);

/// "evaluations,best,mean,population".
void write_convergence(const ConvergenceLog& log, const std::filesystem::path& path);

/// best_params.csv, concern.csv and convergence.csv into `dir` (created).
void write_result(const CalibrationResult& result, const CalibrationProblem& problem,
                  const std::filesystem::path& dir);

}  // namespace odcal
