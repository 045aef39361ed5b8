#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "odcal/problem.hpp"

namespace odcal {

/// 100 * mean over periods of |c - h| / h. Periods with a missing target are
/// skipped; the divisor is the number of present targets unless
/// `normalization` is AllPeriods. Throws InvalidParameter on length mismatch,
/// a zero target, or no present target.
double mape(std::span<const double> simulated, const TargetSeries& targets,
            MapeNormalization normalization = MapeNormalization::PresentTargets);

struct FitnessValue {
  double mean_mape = 0.0;
  std::vector<double> per_replicate;
  /// Mean over replicates of 100 * |c - h| / h; empty for missing targets.
  std::vector<std::optional<double>> per_period_error;
  /// Mean simulated concern per period over replicates.
  std::vector<double> mean_concern;
  /// Standard error of mean_mape over replicates (0 for one replicate).
  double standard_error() const noexcept;

  friend bool operator==(const FitnessValue&, const FitnessValue&) = default;
};

/// Seed of replicate r within evaluation `tag`: mix_seed(mix_seed(master, tag), r).
std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t tag,
                             std::size_t replicate) noexcept;

/// One Monte Carlo replicate from a single stream: initial opinions first,
/// then the network (when the problem regenerates it), then the dynamics.
HorizonResult run_replicate(const ParameterSchedule& schedule, const CalibrationProblem& problem,
                            std::uint64_t stream_seed, bool snapshots = false);

/// Decodes the genome and averages MAPE over `replicates` independent runs.
/// Each replicate draws its own initial opinions (and network, when the
/// problem regenerates it) from its stream. Replicates run on up to
/// `threads` workers; the reduction is in replicate order.
FitnessValue evaluate(std::span<const double> genome, const CalibrationProblem& problem,
                      std::size_t replicates, std::uint64_t master_seed, std::uint64_t tag = 0,
                      std::size_t threads = 1);

}  // namespace odcal
