#pragma once

// Run configuration for the odcal command line (JSON, schema "odcal.run/v1").
// Relative paths resolve against the config file's directory.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "odcal/evolve.hpp"
#include "odcal/problem.hpp"

namespace odcal::cli {

inline constexpr const char* kSchema = "odcal.run/v1";

struct NetworkConfig {
  std::size_t m = 3;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> edge_list;
  bool regenerate_per_replicate = false;
};

struct GridConfig {
  std::vector<Model> models;
  std::vector<double> c_th;
  std::vector<Algorithm> algorithms;
};

struct RunConfig {
  Model model = Model::ATBCR;
  Algorithm algorithm = Algorithm::DE;
  double c_th = 0.9;
  std::filesystem::path survey;
  std::filesystem::path targets;
  std::optional<std::filesystem::path> params;
  NetworkConfig network;
  std::size_t steps_per_period = 13'500;
  std::size_t replicates = 20;
  std::size_t reevaluation_replicates = 20;
  MapeNormalization mape_normalization = MapeNormalization::PresentTargets;
  FjUpdate fj_update = FjUpdate::Asynchronous;
  std::size_t steps_per_day = 450;
  OptimizerConfig optimizer;
  std::size_t repetitions = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::filesystem::path out = "results";
  std::optional<GridConfig> grid;
  bool snapshots = false;

  /// Throws ConfigError on values no command can run with.
  void validate() const;
};

/// Parses and schema-checks a config. Unknown keys are errors; the
/// output-only "result" key is ignored. Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const nlohmann::ordered_json& doc, const std::filesystem::path& base_dir);

/// Serializes every field (paths as given, already absolute in echoes).
nlohmann::ordered_json to_json(const RunConfig& config);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const nlohmann::ordered_json& doc, const std::filesystem::path& path);

}  // namespace odcal::cli
