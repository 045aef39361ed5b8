#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "odcal/graph.hpp"
#include "odcal/rng.hpp"
#include "odcal/survey.hpp"

namespace odcal {

enum class Model { FJ, DW, ATBCR };

std::string_view to_string(Model model) noexcept;
/// Accepts "FJ", "DW", "ATBCR" (case-insensitive). Throws InvalidParameter.
Model parse_model(std::string_view name);
/// Parameters per period: FJ 1, DW 2, ATBCR 3.
std::size_t params_per_period(Model model) noexcept;

/// Friedkin-Johnsen: susceptibility to neighbors; 1 - xi is stubbornness.
struct FjParams {
  double xi;
  friend bool operator==(const FjParams&, const FjParams&) = default;
};

/// Deffuant-Weisbuch: convergence speed and confidence threshold.
struct DwParams {
  double mu;
  double eps;
  friend bool operator==(const DwParams&, const DwParams&) = default;
};

/// Attraction-repulsion bounded confidence with a uniform polarization
/// threshold: attract below eps, repel above theta.
struct AtbcrParams {
  double mu;
  double eps;
  double theta;
  friend bool operator==(const AtbcrParams&, const AtbcrParams&) = default;
};

using PeriodParams = std::variant<FjParams, DwParams, AtbcrParams>;

Model model_of(const PeriodParams& params) noexcept;

/// Checks the calibration domain: xi in [0.1,1]; mu in (0,0.5]; eps in
/// [0,0.5]; theta in [0.5,1]; 0.1 <= theta - eps <= 0.9.
/// `tolerance` absorbs rounding in values read back from text.
bool within_domain(const PeriodParams& params, double tolerance = 0.0) noexcept;

/// Per-period parameters, all of one model.
class ParameterSchedule {
 public:
  ParameterSchedule(std::vector<PeriodParams> periods, std::size_t steps_per_period);

  Model model() const noexcept { return model_; }
  std::size_t size() const noexcept { return periods_.size(); }
  std::size_t steps_per_period() const noexcept { return steps_per_period_; }
  const std::vector<PeriodParams>& periods() const noexcept { return periods_; }
  const PeriodParams& operator[](std::size_t p) const noexcept { return periods_[p]; }

  friend bool operator==(const ParameterSchedule&, const ParameterSchedule&) = default;

 private:
  Model model_;
  std::vector<PeriodParams> periods_;
  std::size_t steps_per_period_;
};

using OpinionProfile = std::vector<double>;
using ConcernSeries = std::vector<double>;

// Single micro-updates. They assume valid indices; pairs are assumed to be
// network edges.

/// x[agent] <- xi * mean(neighbor opinions) + (1 - xi) * baseline[agent].
/// An isolated agent is left unchanged.
void fj_step(std::span<double> state, std::span<const double> baseline,
             const SocialNetwork& network, double xi, NodeId agent) noexcept;

/// Both endpoints move toward each other by mu * gap when |gap| < eps.
void dw_step(std::span<double> state, double mu, double eps, NodeId i, NodeId j) noexcept;

/// dw_step attraction when |gap| < eps; when |gap| > theta both endpoints
/// move apart by mu * gap and are clamped to [0,1]; otherwise no change.
void atbcr_step(std::span<double> state, double mu, double eps, double theta, NodeId i,
                NodeId j) noexcept;

enum class FjUpdate {
  Asynchronous,  // one uniformly random agent per step
  Synchronous,   // one full sweep per simulated day
};

struct SimulationOptions {
  FjUpdate fj_update = FjUpdate::Asynchronous;
  std::size_t steps_per_day = 450;  // only used by synchronous FJ
};

/// Runs `steps` micro-steps under one period's parameters. Pair models draw
/// a random edge per step; FJ updates one random agent per step (or does
/// steps / steps_per_day synchronous sweeps).
void simulate_period(const PeriodParams& params, std::span<double> state,
                     std::span<const double> baseline, const SocialNetwork& network,
                     std::size_t steps, Rng& rng, const SimulationOptions& options = {});

/// (count of x >= c_th) / N.
double concern_proportion(std::span<const double> state, double c_th) noexcept;

struct HorizonResult {
  ConcernSeries concern;                   // one reading per period end
  std::vector<OpinionProfile> snapshots;   // initial + one per period, if requested
};

/// Runs every period of `schedule` in order from `initial`. The FJ baseline
/// is `initial` for the whole horizon.
HorizonResult simulate_horizon(const ParameterSchedule& schedule, const OpinionProfile& initial,
                               const SocialNetwork& network, double c_th, Rng& rng,
                               bool snapshots = false, const SimulationOptions& options = {});

}  // namespace odcal
