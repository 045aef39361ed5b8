#include "odcal/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "odcal/error.hpp"

namespace odcal {

std::string_view to_string(Model model) noexcept {
  switch (model) {
    case Model::FJ:
      return "FJ";
    case Model::DW:
      return "DW";
    case Model::ATBCR:
      return "ATBCR";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "FJ") return Model::FJ;
  if (upper == "DW") return Model::DW;
  if (upper == "ATBCR") return Model::ATBCR;
  throw InvalidParameter("unknown model '" + std::string(name) + "' (expected FJ, DW or ATBCR)");
}

std::size_t params_per_period(Model model) noexcept {
  switch (model) {
    case Model::FJ:
      return 1;
    case Model::DW:
      return 2;
    case Model::ATBCR:
      return 3;
  }
  return 0;
}

Model model_of(const PeriodParams& params) noexcept {
  return static_cast<Model>(params.index());
}

bool within_domain(const PeriodParams& params, double tol) noexcept {
  auto in = [tol](double v, double lo, double hi) { return v >= lo - tol && v <= hi + tol; };
  if (const auto* fj = std::get_if<FjParams>(&params)) return in(fj->xi, 0.1, 1.0);
  if (const auto* dw = std::get_if<DwParams>(&params))
    return dw->mu > 0.0 && in(dw->mu, 0.0, 0.5) && in(dw->eps, 0.0, 0.5);
  const auto& a = std::get<AtbcrParams>(params);
  return a.mu > 0.0 && in(a.mu, 0.0, 0.5) && in(a.eps, 0.0, 0.5) && in(a.theta, 0.5, 1.0) &&
         in(a.theta - a.eps, 0.1, 0.9);
}

ParameterSchedule::ParameterSchedule(std::vector<PeriodParams> periods,
                                     std::size_t steps_per_period)
    : model_(periods.empty() ? Model::FJ : model_of(periods.front())),
      periods_(std::move(periods)),
      steps_per_period_(steps_per_period) {
  if (periods_.empty()) throw InvalidParameter("parameter schedule has no periods");
  for (const auto& p : periods_)
    if (model_of(p) != model_) throw InvalidParameter("parameter schedule mixes models");
}

void fj_step(std::span<double> state, std::span<const double> baseline,
             const SocialNetwork& network, double xi, NodeId agent) noexcept {
  const auto nb = network.neighbors(agent);
  if (nb.empty()) return;
  double sum = 0.0;
  for (NodeId j : nb) sum += state[j];
  const double mean = sum / static_cast<double>(nb.size());
  state[agent] = xi * mean + (1.0 - xi) * baseline[agent];
}

void dw_step(std::span<double> state, double mu, double eps, NodeId i, NodeId j) noexcept {
  const double xi = state[i];
  const double xj = state[j];
  if (std::abs(xi - xj) < eps) {
    state[i] = xi + mu * (xj - xi);
    state[j] = xj + mu * (xi - xj);
  }
}

void atbcr_step(std::span<double> state, double mu, double eps, double theta, NodeId i,
                NodeId j) noexcept {
  const double xi = state[i];
  const double xj = state[j];
  const double gap = std::abs(xi - xj);
  if (gap < eps) {
    state[i] = xi + mu * (xj - xi);
    state[j] = xj + mu * (xi - xj);
  } else if (gap > theta) {
    state[i] = std::clamp(xi - mu * (xj - xi), 0.0, 1.0);
    state[j] = std::clamp(xj - mu * (xi - xj), 0.0, 1.0);
  }
}

namespace {

void fj_sweep(std::span<double> state, std::span<const double> baseline,
              const SocialNetwork& network, double xi, std::vector<double>& scratch) {
  scratch.assign(state.begin(), state.end());
  for (std::size_t v = 0; v < state.size(); ++v) {
    const auto nb = network.neighbors(static_cast<NodeId>(v));
    if (nb.empty()) continue;
    double sum = 0.0;
    for (NodeId j : nb) sum += scratch[j];
    state[v] = xi * (sum / static_cast<double>(nb.size())) + (1.0 - xi) * baseline[v];
  }
}

}  // namespace

void simulate_period(const PeriodParams& params, std::span<double> state,
                     std::span<const double> baseline, const SocialNetwork& network,
                     std::size_t steps, Rng& rng, const SimulationOptions& options) {
  if (steps == 0) return;
  if (const auto* fj = std::get_if<FjParams>(&params)) {
    if (options.fj_update == FjUpdate::Synchronous) {
      const std::size_t per_day = std::max<std::size_t>(options.steps_per_day, 1);
      std::vector<double> scratch;
      for (std::size_t d = 0; d < steps / per_day; ++d)
        fj_sweep(state, baseline, network, fj->xi, scratch);
      return;
    }
    const std::size_t n = state.size();
    for (std::size_t s = 0; s < steps; ++s)
      fj_step(state, baseline, network, fj->xi, static_cast<NodeId>(rng.below(n)));
  } else if (const auto* dw = std::get_if<DwParams>(&params)) {
    for (std::size_t s = 0; s < steps; ++s) {
      const auto [i, j] = random_edge(network, rng);
      dw_step(state, dw->mu, dw->eps, i, j);
    }
  } else {
    const auto& a = std::get<AtbcrParams>(params);
    for (std::size_t s = 0; s < steps; ++s) {
      const auto [i, j] = random_edge(network, rng);
      atbcr_step(state, a.mu, a.eps, a.theta, i, j);
    }
  }
}

double concern_proportion(std::span<const double> state, double c_th) noexcept {
  if (state.empty()) return 0.0;
  const auto hits = std::count_if(state.begin(), state.end(), [c_th](double x) { return x >= c_th; });
  return static_cast<double>(hits) / static_cast<double>(state.size());
}

HorizonResult simulate_horizon(const ParameterSchedule& schedule, const OpinionProfile& initial,
                               const SocialNetwork& network, double c_th, Rng& rng,
                               bool snapshots, const SimulationOptions& options) {
  if (initial.size() != network.size())
    throw InvalidParameter("opinion profile size " + std::to_string(initial.size()) +
                           " does not match network size " + std::to_string(network.size()));
  HorizonResult result;
  result.concern.reserve(schedule.size());
  OpinionProfile state = initial;
  if (snapshots) result.snapshots.push_back(state);
  for (const auto& params : schedule.periods()) {
    simulate_period(params, state, initial, network, schedule.steps_per_period(), rng, options);
    result.concern.push_back(concern_proportion(state, c_th));
    if (snapshots) result.snapshots.push_back(state);
  }
  return result;
}

}  // namespace odcal
