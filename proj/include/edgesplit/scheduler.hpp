#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "edgesplit/search.hpp"
#include "edgesplit/simenv.hpp"

namespace edgesplit {

struct SchedulerConfig {
  Split initial_split{0, 1};
  ObjectiveWeights weights;
  double deadline_s = 0.0;  // 0 disables deadline handling
  int r_profile = 50;       // baseline inferences at the initial split
  int r_probe = 15;         // inferences per probe split
  int r_steady = 100;       // inferences per steady-state window
  int k_warm = 5;           // leading inferences discarded from every batch
  double switch_threshold = 0.03;
  int min_edge_layers = 1;
  std::int64_t total_budget = 500;
  ProbeConfig probe;
  double edge_watts = kEdgePowerWatts;

  /// Phase-1 inferences plus one full window.
  std::int64_t minimum_budget() const noexcept {
    return std::int64_t{r_profile} + 3 * std::int64_t{r_probe} + r_steady;
  }
  /// Throws ConfigError on any violated constraint, including an initial
  /// split that is invalid for `n_features`.
  void validate(int n_features) const;
  bool operator==(const SchedulerConfig&) const = default;
};

enum class Decision { stay, normal_switch, forced_switch, fallback };

std::string_view to_string(Decision d);

struct SwitchOutcome {
  Decision decision = Decision::stay;
  Split next;

  bool operator==(const SwitchOutcome&) const = default;
};

/// Re-evaluation cascade, first match wins:
///  1. deadline hit and a different candidate exists  -> forced switch to it
///  2. a different candidate improves by >= threshold -> normal switch to it
///  3. deadline hit and current != baseline           -> fall back to baseline
///  4. otherwise                                      -> stay
/// `improvement` is ignored when there is no candidate.
SwitchOutcome decide_switch(Split current, Split baseline, std::optional<Split> candidate, double improvement,
                            bool deadline_hit, double threshold) noexcept;

struct SampleMeans {
  std::size_t count = 0;
  double latency_s = 0.0;
  PerTier<double> energy_j;
  double total_energy_j = 0.0;

  bool operator==(const SampleMeans&) const = default;
};

SampleMeans mean_of(std::span<const InferenceSample> samples);

struct WindowReport {
  int index = 0;
  Split split;                     // split the window ran at
  SampleMeans means;               // over retained samples
  std::optional<Split> candidate;  // best alternative found, if any
  double current_score = 0.0;      // re-estimated score of `split`
  std::optional<double> candidate_score;
  std::optional<double> improvement;  // (current - candidate) / current
  bool deadline_hit = false;
  Decision decision = Decision::stay;
  Split next_split;
  NodeRates rates;
  LinkPair links;
  std::vector<InferenceSample> samples;  // retained (post-warmup) samples

  bool operator==(const WindowReport&) const = default;
};

struct SchedulerState {
  Split current;
  Split baseline;
  SampleMeans baseline_means;
  Anchors anchors;
  double baseline_score = 0.0;
  std::vector<Split> probes_run;
  std::vector<InferenceSample> base_samples;
  std::vector<InferenceSample> probe_samples;
  NodeRates rates;
  LinkPair links;
  std::vector<WindowReport> windows;
  std::int64_t inferences_run = 0;

  ObjectiveSpec objective(const SchedulerConfig& config) const;
};

/// Edge-heavy, balanced and cloud-heavy cuts at fifths of the feature range,
/// clamped into the valid region; duplicates move to the nearest unused pair.
std::vector<Split> probe_splits(int n_features, int min_edge_layers);

/// Baseline run, probe splits, rate fit, link probes, initial selection.
SchedulerState initialize(const SchedulerConfig& config, const ModelProfile& profile, InferenceEnvironment& env);

/// One steady-state window of `config.r_steady` inferences followed by a
/// re-evaluation. On failure `state` is left as it was.
WindowReport steady_window(SchedulerState& state, const SchedulerConfig& config, const ModelProfile& profile,
                           InferenceEnvironment& env);

using WindowSink = std::function<void(const WindowReport&)>;

struct ExperimentReport {
  Split initial_split;   // chosen at the end of initialization
  double baseline_score = 0.0;
  Anchors anchors;
  SampleMeans baseline_means;
  std::vector<WindowReport> windows;
  std::int64_t phase1_inferences = 0;
  std::int64_t steady_inferences = 0;
  SampleMeans steady_means;  // retained steady-state samples only

  bool operator==(const ExperimentReport&) const = default;
};

/// Initialization, then full windows while the budget allows; leftover
/// inferences run at the current split without re-evaluation.
ExperimentReport run(const SchedulerConfig& config, const ModelProfile& profile, InferenceEnvironment& env,
                     const WindowSink& sink = {});

}  // namespace edgesplit
