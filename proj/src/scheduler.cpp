#include "edgesplit/scheduler.hpp"

#include <algorithm>
#include <cstdlib>

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit {

void SchedulerConfig::validate(int n_features) const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (r_profile <= k_warm) fail(fmt::format("r_profile ({}) must exceed k_warm ({})", r_profile, k_warm));
  if (r_probe <= k_warm) fail(fmt::format("r_probe ({}) must exceed k_warm ({})", r_probe, k_warm));
  if (r_steady <= k_warm) fail(fmt::format("r_steady ({}) must exceed k_warm ({})", r_steady, k_warm));
  if (k_warm < 0) fail("k_warm must be >= 0");
  if (!(switch_threshold >= 0.0)) fail("switch threshold must be >= 0");
  if (!(deadline_s >= 0.0)) fail("deadline must be >= 0");
  if (min_edge_layers < 1) fail("min_edge_layers must be >= 1");
  if (total_budget <= 0) fail("total budget must be > 0");
  if (!(edge_watts > 0.0)) fail("edge power must be > 0");
  const auto& w = weights;
  if (!(w.edge_energy >= 0.0 && w.total_energy >= 0.0 && w.latency >= 0.0) ||
      !(w.edge_energy + w.total_energy + w.latency > 0.0)) {
    fail("objective weights must be >= 0 and not all zero");
  }
  try {
    probe.validate();
    require_valid_split(initial_split, n_features, min_edge_layers);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    fail(e.what());
  }
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::stay: return "stay";
    case Decision::normal_switch: return "normal-switch";
    case Decision::forced_switch: return "forced-switch";
    case Decision::fallback: return "fallback";
  }
  return "?";
}

SwitchOutcome decide_switch(Split current, Split baseline, std::optional<Split> candidate, double improvement,
                            bool deadline_hit, double threshold) noexcept {
  const bool differs = candidate.has_value() && *candidate != current;
  if (deadline_hit && differs) return {Decision::forced_switch, *candidate};
  if (differs && improvement >= threshold) return {Decision::normal_switch, *candidate};
  if (deadline_hit && current != baseline) return {Decision::fallback, baseline};
  return {Decision::stay, current};
}

SampleMeans mean_of(std::span<const InferenceSample> samples) {
  SampleMeans m;
  m.count = samples.size();
  if (samples.empty()) return m;
  for (const auto& s : samples) {
    m.latency_s += s.latency_s;
    for (Tier t : kTiers) m.energy_j[t] += s.energy_j[t];
  }
  const double n = static_cast<double>(samples.size());
  m.latency_s /= n;
  for (Tier t : kTiers) m.energy_j[t] /= n;
  m.total_energy_j = m.energy_j.edge + m.energy_j.fog + m.energy_j.cloud;
  return m;
}

ObjectiveSpec SchedulerState::objective(const SchedulerConfig& config) const {
  return ObjectiveSpec{config.weights, anchors, baseline_score, config.deadline_s, config.min_edge_layers};
}

std::vector<Split> probe_splits(int n_features, int min_edge_layers) {
  const int n = n_features;
  const int lo = min_edge_layers - 1;
  const int valid_pairs = n - lo >= 2 ? (n - lo) * (n - lo - 1) / 2 : 0;
  if (min_edge_layers < 1 || valid_pairs < 3) {
    throw ProbeSpaceError(fmt::format("fewer than 3 valid splits for {} feature layers with at least {} on the edge",
                                      n_features, min_edge_layers));
  }
  const std::array<Split, 3> raw{Split{3 * n / 5, 4 * n / 5}, Split{2 * n / 5, 3 * n / 5}, Split{n / 5, 2 * n / 5}};

  std::vector<Split> out;
  for (Split s : raw) {
    s.last_edge = std::clamp(s.last_edge, lo, n - 2);
    s.last_fog = std::clamp(s.last_fog, s.last_edge + 1, n - 1);
    if (std::find(out.begin(), out.end(), s) != out.end()) {
      std::optional<Split> nearest;
      int best_dist = 0;
      for (int i = lo; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          const Split c{i, j};
          if (std::find(out.begin(), out.end(), c) != out.end()) continue;
          const int dist = std::abs(i - s.last_edge) + std::abs(j - s.last_fog);
          if (!nearest || dist < best_dist) {
            nearest = c;
            best_dist = dist;
          }
        }
      }
      s = *nearest;
    }
    out.push_back(s);
  }
  return out;
}

namespace {

// Runs `count` inferences at `split`, keeping those after the first `k_warm`.
std::vector<InferenceSample> run_batch(InferenceEnvironment& env, const ModelProfile& profile, Split split, int count,
                                       int k_warm) {
  std::vector<InferenceSample> kept;
  kept.reserve(static_cast<std::size_t>(std::max(count - k_warm, 0)));
  for (int r = 1; r <= count; ++r) {
    InferenceSample s = env.run_inference(split, profile);
    if (r > k_warm) kept.push_back(s);
  }
  return kept;
}

LinkPair probe_links(InferenceEnvironment& env, const ProbeConfig& cfg, const LinkPair& previous) {
  return LinkPair{probe_link(env.hop(Hop::edge_fog), cfg, previous.edge_fog),
                  probe_link(env.hop(Hop::fog_cloud), cfg, previous.fog_cloud)};
}

template <class Fn>
auto tag_environment_failure(const char* phase, Fn&& fn) {
  try {
    return fn();
  } catch (const EnvironmentError& e) {
    throw InitializationError(phase, e.what());
  } catch (const TransportError& e) {
    throw InitializationError(phase, e.what());
  } catch (const LinkProbeTransportError& e) {
    throw InitializationError(phase, e.what());
  }
}

Anchors anchors_from(const SampleMeans& m) { return Anchors{m.energy_j.edge, m.total_energy_j, m.latency_s}; }

}  // namespace

SchedulerState initialize(const SchedulerConfig& config, const ModelProfile& profile, InferenceEnvironment& env) {
  config.validate(profile.feature_count());
  const std::vector<Split> probes = probe_splits(profile.feature_count(), config.min_edge_layers);

  SchedulerState st;
  st.baseline = config.initial_split;
  st.current = config.initial_split;

  // Phase 1a: baseline at the initial split.
  st.base_samples = tag_environment_failure(
      "1a", [&] { return run_batch(env, profile, st.baseline, config.r_profile, config.k_warm); });
  st.inferences_run += config.r_profile;
  st.baseline_means = mean_of(st.base_samples);

  // Phase 1b: probe splits other than the baseline.
  for (Split p : probes) {
    if (p == config.initial_split) continue;
    auto kept = tag_environment_failure(
        "1b", [&] { return run_batch(env, profile, p, config.r_probe, config.k_warm); });
    st.inferences_run += config.r_probe;
    st.probe_samples.insert(st.probe_samples.end(), kept.begin(), kept.end());
    st.probes_run.push_back(p);
  }

  // Phase 1c: anchors from probes only, baseline score, rates, links, start split.
  st.anchors = anchors_from(mean_of(st.probe_samples));
  SplitEstimate measured_baseline;
  measured_baseline.latency_s = st.baseline_means.latency_s;
  measured_baseline.energy_j = st.baseline_means.energy_j;
  measured_baseline.total_energy_j = st.baseline_means.total_energy_j;
  st.baseline_score = score(measured_baseline, config.weights, st.anchors);

  std::vector<InferenceSample> phase1 = st.base_samples;
  phase1.insert(phase1.end(), st.probe_samples.begin(), st.probe_samples.end());
  st.rates = fit_rates(phase1, profile, config.edge_watts);
  st.links = tag_environment_failure("1c", [&] { return probe_links(env, config.probe, st.links); });

  const auto best = find_best(profile, st.rates, st.links, st.objective(config), std::nullopt);
  st.current = best.value_or(config.initial_split);
  return st;
}

WindowReport steady_window(SchedulerState& state, const SchedulerConfig& config, const ModelProfile& profile,
                           InferenceEnvironment& env) {
  WindowReport rep;
  rep.index = static_cast<int>(state.windows.size());
  rep.split = state.current;

  std::vector<InferenceSample> window;
  try {
    window = run_batch(env, profile, state.current, config.r_steady, config.k_warm);
    rep.links = probe_links(env, config.probe, state.links);
  } catch (const EnvironmentError& e) {
    throw WindowAbortedError(fmt::format("window {}: {}", rep.index, e.what()));
  } catch (const TransportError& e) {
    throw WindowAbortedError(fmt::format("window {}: {}", rep.index, e.what()));
  } catch (const LinkProbeTransportError& e) {
    throw WindowAbortedError(fmt::format("window {}: {}", rep.index, e.what()));
  }
  rep.means = mean_of(window);

  std::vector<InferenceSample> fit_set = state.base_samples;
  fit_set.insert(fit_set.end(), state.probe_samples.begin(), state.probe_samples.end());
  fit_set.insert(fit_set.end(), window.begin(), window.end());
  rep.rates = fit_rates(fit_set, profile, config.edge_watts);

  const ObjectiveSpec spec = state.objective(config);
  rep.candidate = find_best(profile, rep.rates, rep.links, spec, state.current);
  rep.current_score =
      score(estimate_split(state.current, profile, rep.rates, rep.links.edge_fog, rep.links.fog_cloud), spec);
  if (rep.candidate) {
    rep.candidate_score =
        score(estimate_split(*rep.candidate, profile, rep.rates, rep.links.edge_fog, rep.links.fog_cloud), spec);
    rep.improvement = (rep.current_score - *rep.candidate_score) / rep.current_score;
  }
  rep.deadline_hit = config.deadline_s > 0.0 && rep.means.latency_s > config.deadline_s;

  const SwitchOutcome out = decide_switch(state.current, state.baseline, rep.candidate, rep.improvement.value_or(0.0),
                                          rep.deadline_hit, config.switch_threshold);
  rep.decision = out.decision;
  rep.next_split = out.next;

  state.rates = rep.rates;
  state.links = rep.links;
  state.current = out.next;
  state.inferences_run += config.r_steady;
  rep.samples = std::move(window);
  state.windows.push_back(rep);
  return rep;
}

ExperimentReport run(const SchedulerConfig& config, const ModelProfile& profile, InferenceEnvironment& env,
                     const WindowSink& sink) {
  config.validate(profile.feature_count());
  if (config.total_budget < config.minimum_budget()) {
    throw ConfigError(fmt::format("budget {} is below the minimum of {} inferences (r_profile + 3*r_probe + r_steady)",
                                  config.total_budget, config.minimum_budget()));
  }

  SchedulerState state = initialize(config, profile, env);
  ExperimentReport report;
  report.initial_split = state.current;
  report.baseline_score = state.baseline_score;
  report.anchors = state.anchors;
  report.baseline_means = state.baseline_means;
  report.phase1_inferences = state.inferences_run;

  std::vector<InferenceSample> steady;
  std::int64_t remaining = config.total_budget - state.inferences_run;
  while (remaining >= config.r_steady) {
    WindowReport rep = steady_window(state, config, profile, env);
    remaining -= config.r_steady;
    report.steady_inferences += config.r_steady;
    steady.insert(steady.end(), rep.samples.begin(), rep.samples.end());
    if (sink) sink(rep);
    report.windows.push_back(std::move(rep));
  }
  if (remaining > 0) {
    // Truncated tail: same warmup rule, no re-evaluation.
    auto tail = run_batch(env, profile, state.current, static_cast<int>(remaining), config.k_warm);
    report.steady_inferences += remaining;
    state.inferences_run += remaining;
    steady.insert(steady.end(), tail.begin(), tail.end());
  }
  report.steady_means = mean_of(steady);
  return report;
}

}  // namespace edgesplit
