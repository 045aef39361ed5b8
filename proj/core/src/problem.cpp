#include "odcal/problem.hpp"

#include <string>

#include "odcal/error.hpp"

namespace odcal {

void CalibrationProblem::validate() const {
  if (!network && !regenerate_network) throw InvalidParameter("calibration problem has no network");
  if (survey.ranks.empty()) throw InvalidParameter("survey dataset has no respondents");
  if (network && network->size() != survey.size())
    throw InvalidParameter("network has " + std::to_string(network->size()) +
                           " nodes but the survey has " + std::to_string(survey.size()) +
                           " respondents");
  if (regenerate_network && (network_m < 1 || survey.size() <= network_m))
    throw InvalidParameter("network regeneration needs respondents > m >= 1");
  if (periods() == 0) throw InvalidParameter("target series is empty");
  validate_targets(targets);
  if (replicates == 0) throw InvalidParameter("replicates must be at least 1");
}

Bounds bounds_for(Model model, std::size_t periods) {
  Bounds b;
  for (std::size_t p = 0; p < periods; ++p) {
    switch (model) {
      case Model::FJ:
        b.lo.push_back(0.1), b.hi.push_back(1.0);
        break;
      case Model::DW:
        b.lo.push_back(kMinConvergenceSpeed), b.hi.push_back(0.5);
        b.lo.push_back(0.0), b.hi.push_back(0.5);
        break;
      case Model::ATBCR: {
        const std::size_t base = b.lo.size();
        b.lo.push_back(kMinConvergenceSpeed), b.hi.push_back(0.5);
        b.lo.push_back(0.0), b.hi.push_back(0.5);
        b.lo.push_back(0.5), b.hi.push_back(1.0);
        b.pairs.push_back({base + 1, base + 2, 0.1, 0.9});
        break;
      }
    }
  }
  return b;
}

ParameterSchedule decode(std::span<const double> genome, Model model, std::size_t periods,
                         std::size_t steps_per_period) {
  const std::size_t k = params_per_period(model);
  if (periods == 0 || genome.size() != periods * k)
    throw InvalidGenome("genome length " + std::to_string(genome.size()) + " does not match " +
                        std::to_string(periods) + " periods of " + std::string(to_string(model)));
  std::vector<PeriodParams> out;
  out.reserve(periods);
  for (std::size_t p = 0; p < periods; ++p) {
    const double* v = genome.data() + p * k;
    switch (model) {
      case Model::FJ:
        out.emplace_back(FjParams{v[0]});
        break;
      case Model::DW:
        out.emplace_back(DwParams{v[0], v[1]});
        break;
      case Model::ATBCR:
        out.emplace_back(AtbcrParams{v[0], v[1], v[2]});
        break;
    }
  }
  return ParameterSchedule(std::move(out), steps_per_period);
}

Genome encode(const ParameterSchedule& schedule) {
  Genome g;
  g.reserve(schedule.size() * params_per_period(schedule.model()));
  for (const auto& params : schedule.periods()) {
    std::visit(
        [&g](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, FjParams>) {
            g.push_back(p.xi);
          } else if constexpr (std::is_same_v<T, DwParams>) {
            g.push_back(p.mu);
            g.push_back(p.eps);
          } else {
            g.push_back(p.mu);
            g.push_back(p.eps);
            g.push_back(p.theta);
          }
        },
        params);
  }
  return g;
}

}  // namespace odcal
