#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edgesplit/scenario.hpp"

namespace edgesplit {

/// Aggregated means of one strategy across repetitions.
struct StrategyResult {
  std::string strategy;  // "single-device:<tier>", "static" or "adaptive"
  SampleMeans means;     // mean of per-repetition means
  std::vector<SampleMeans> per_repetition;
};

/// Relative reductions of adaptive over static, as fractions (0.25 = 25 %).
struct Reductions {
  double latency = 0.0;
  double total_energy = 0.0;
};

Reductions compute_reductions(double static_latency, double static_energy, double adaptive_latency,
                              double adaptive_energy);

struct CheckResult {
  std::string name;
  std::string description;
  bool passed = false;
};

struct ExperimentOutcome {
  std::string scenario;
  ExperimentSpec experiment;
  std::vector<StrategyResult> strategies;
  std::vector<ExperimentReport> adaptive_runs;  // one per repetition
  std::optional<Reductions> reductions;         // compare mode only
  std::vector<CheckResult> checks;              // compare mode only

  const StrategyResult* find(std::string_view strategy) const;
};

struct RunOptions {
  /// Route link probes through a localhost loopback server instead of the
  /// simulated hops (activation transfers stay simulated).
  bool loopback = false;
};

/// Seeds: repetition k uses experiment.seed + k for the static run,
/// + 1'000'000 for the adaptive run and + 2'000'000 for single-device runs.
ExperimentOutcome run_experiment(const ScenarioConfig& config, const RunOptions& options = {});

/// Direction checks for the compare mode: adaptive must not use more total
/// energy than static and its latency must stay within 5 % of static.
std::vector<CheckResult> evaluate_checks(const SampleMeans& static_means, const SampleMeans& adaptive_means);

/// Writes windows.csv (adaptive repetition 0), summary.csv and comparison.txt.
void emit_reports(const ExperimentOutcome& outcome, const std::filesystem::path& out_dir);

std::string windows_csv(const ExperimentOutcome& outcome);
std::string summary_csv(const ExperimentOutcome& outcome);
std::string comparison_text(const ExperimentOutcome& outcome);

}  // namespace edgesplit
