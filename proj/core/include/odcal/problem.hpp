#pragma once

#include <cstddef>
#include <memory>

#include "odcal/dynamics.hpp"
#include "odcal/evolve.hpp"
#include "odcal/graph.hpp"
#include "odcal/survey.hpp"

namespace odcal {

/// Smallest convergence speed the optimizers may propose. The calibration
/// domain is the half-open (0, 0.5]; a box needs a closed lower end.
inline constexpr double kMinConvergenceSpeed = 1e-3;

enum class MapeNormalization {
  PresentTargets,  // divide by the number of periods that have a target
  AllPeriods,      // divide by |P| even when some targets are missing
};

/// Everything needed to score a genome for one model.
struct CalibrationProblem {
  Model model = Model::ATBCR;
  std::shared_ptr<const SocialNetwork> network;
  SurveyDataset survey;
  ConcernThreshold c_th{0.9};
  TargetSeries targets;
  std::size_t steps_per_period = 13'500;
  std::size_t replicates = 20;
  MapeNormalization normalization = MapeNormalization::PresentTargets;
  SimulationOptions simulation;

  /// When set, each replicate builds its own BA network (same size, this m)
  /// from its stream instead of using `network`. Sensitivity checks only.
  bool regenerate_network = false;
  std::size_t network_m = 3;

  std::size_t periods() const noexcept { return targets.size(); }
  std::size_t dimension() const noexcept { return periods() * params_per_period(model); }

  /// Throws InvalidParameter when the parts do not fit together.
  void validate() const;
};

/// Box bounds per period plus, for ATBCR, 0.1 <= theta - eps <= 0.9.
Bounds bounds_for(Model model, std::size_t periods);

/// Period-major layout: ATBCR (mu, eps, theta), DW (mu, eps), FJ (xi).
/// Throws InvalidGenome on a length mismatch.
ParameterSchedule decode(std::span<const double> genome, Model model, std::size_t periods,
                         std::size_t steps_per_period);
Genome encode(const ParameterSchedule& schedule);

}  // namespace odcal
