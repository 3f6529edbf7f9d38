#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "edgesplit/fixtures.hpp"

namespace edgesplit {

enum class ExperimentMode { single_device, static_split, adaptive, compare };

struct ExperimentSpec {
  ExperimentMode mode = ExperimentMode::compare;
  Tier single_device_tier = Tier::edge;  // used by ExperimentMode::single_device
  std::int64_t budget = 500;             // inferences per strategy per repetition
  int repetitions = 10;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentSpec&) const = default;
};

/// "single-device:<tier>", "static", "adaptive" or "compare".
std::string to_string(const ExperimentSpec& spec);

struct ScenarioConfig {
  std::string name;
  ModelProfile profile;
  std::optional<std::string> profile_preset;  // set when the document named a preset
  SimConfig sim;                              // sim.noise.seed is filled per run
  SchedulerConfig scheduler;
  ExperimentSpec experiment;

  /// Re-checks cross-field constraints after programmatic edits (e.g. CLI
  /// overrides). Throws DocumentError with the offending field path.
  void validate() const;
};

/// Parses and validates a scenario document. Relative profile file
/// references resolve against `base_dir`. Every violation raises
/// DocumentError carrying a field path or line/column.
ScenarioConfig load_scenario(std::string_view text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario_file(const std::filesystem::path& path);

nlohmann::json to_json(const ScenarioConfig& config);

/// Scenario document equivalent of a fixture, with the given experiment block.
ScenarioConfig scenario_from_fixture(const ScenarioFixture& fixture, const ExperimentSpec& experiment = {});

}  // namespace edgesplit
