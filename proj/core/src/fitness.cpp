#include "odcal/fitness.hpp"

#include <cmath>
#include <string>

#include "odcal/error.hpp"
#include "odcal/parallel.hpp"

namespace odcal {

double mape(std::span<const double> simulated, const TargetSeries& targets,
            MapeNormalization normalization) {
  if (simulated.size() != targets.size())
    throw InvalidParameter("simulated series has " + std::to_string(simulated.size()) +
                           " periods, targets have " + std::to_string(targets.size()));
  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t p = 0; p < simulated.size(); ++p) {
    const auto& h = targets.points[p].proportion;
    if (!h) continue;
    if (*h == 0.0)
      throw InvalidParameter("target for " + targets.points[p].period + " is zero; MAPE undefined");
    sum += std::abs(simulated[p] - *h) / *h;
    ++present;
  }
  if (present == 0) throw InvalidParameter("MAPE needs at least one present target");
  const std::size_t divisor =
      normalization == MapeNormalization::AllPeriods ? simulated.size() : present;
  return 100.0 * sum / static_cast<double>(divisor);
}

double FitnessValue::standard_error() const noexcept {
  const std::size_t r = per_replicate.size();
  if (r < 2) return 0.0;
  double ss = 0.0;
  for (double v : per_replicate) ss += (v - mean_mape) * (v - mean_mape);
  return std::sqrt(ss / static_cast<double>(r - 1) / static_cast<double>(r));
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::uint64_t tag,
                             std::size_t replicate) noexcept {
  return mix_seed(master_seed, tag, replicate);
}

HorizonResult run_replicate(const ParameterSchedule& schedule, const CalibrationProblem& problem,
                            std::uint64_t stream_seed, bool snapshots) {
  Rng rng(stream_seed);
  const OpinionProfile initial = initialize_opinions(problem.survey, problem.c_th, rng);
  if (problem.regenerate_network) {
    const SocialNetwork net = generate_ba(problem.survey.size(), problem.network_m, rng());
    return simulate_horizon(schedule, initial, net, problem.c_th, rng, snapshots,
                            problem.simulation);
  }
  return simulate_horizon(schedule, initial, *problem.network, problem.c_th, rng, snapshots,
                          problem.simulation);
}

FitnessValue evaluate(std::span<const double> genome, const CalibrationProblem& problem,
                      std::size_t replicates, std::uint64_t master_seed, std::uint64_t tag,
                      std::size_t threads) {
  if (replicates == 0) throw InvalidParameter("replicates must be at least 1");
  const ParameterSchedule schedule =
      decode(genome, problem.model, problem.periods(), problem.steps_per_period);
  const std::size_t periods = problem.periods();

  std::vector<ConcernSeries> concern(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    concern[r] = run_replicate(schedule, problem, replicate_seed(master_seed, tag, r)).concern;
  });

  FitnessValue out;
  out.per_replicate.reserve(replicates);
  out.mean_concern.assign(periods, 0.0);
  std::vector<double> period_err(periods, 0.0);
  for (std::size_t r = 0; r < replicates; ++r) {
    out.per_replicate.push_back(mape(concern[r], problem.targets, problem.normalization));
    for (std::size_t p = 0; p < periods; ++p) {
      out.mean_concern[p] += concern[r][p];
      if (const auto& h = problem.targets.points[p].proportion)
        period_err[p] += 100.0 * std::abs(concern[r][p] - *h) / *h;
    }
  }
  double total = 0.0;
  for (double v : out.per_replicate) total += v;
  out.mean_mape = total / static_cast<double>(replicates);
  out.per_period_error.resize(periods);
  for (std::size_t p = 0; p < periods; ++p) {
    out.mean_concern[p] /= static_cast<double>(replicates);
    if (problem.targets.points[p].proportion)
      out.per_period_error[p] = period_err[p] / static_cast<double>(replicates);
  }
  return out;
}

}  // namespace odcal
