#include "edgesplit/experiment.hpp"

#include <fstream>
#include <memory>

#include <fmt/format.h>

#include "edgesplit/errors.hpp"
#include "edgesplit/loopback.hpp"

namespace edgesplit {

namespace {

constexpr std::uint64_t kAdaptiveSeedOffset = 1'000'000;
constexpr std::uint64_t kSingleDeviceSeedOffset = 2'000'000;

SimConfig seeded(const SimConfig& sim, std::uint64_t seed) {
  SimConfig out = sim;
  out.noise.seed = seed;
  return out;
}

template <class RunOne>
SampleMeans fixed_batch(std::int64_t budget, int k_warm, RunOne&& run_one) {
  std::vector<InferenceSample> kept;
  kept.reserve(static_cast<std::size_t>(budget));
  for (std::int64_t r = 0; r < budget; ++r) {
    auto s = run_one();
    if (r >= k_warm) kept.push_back(s);
  }
  return mean_of(kept);
}

SampleMeans average(const std::vector<SampleMeans>& reps) {
  SampleMeans out;
  if (reps.empty()) return out;
  const double n = static_cast<double>(reps.size());
  for (const auto& m : reps) {
    out.count += m.count;
    out.latency_s += m.latency_s / n;
    out.total_energy_j += m.total_energy_j / n;
    for (Tier t : kTiers) out.energy_j[t] += m.energy_j[t] / n;
  }
  return out;
}

std::string num(double v) { return fmt::format("{:.6g}", v); }

}  // namespace

Reductions compute_reductions(double static_latency, double static_energy, double adaptive_latency,
                              double adaptive_energy) {
  if (!(static_latency > 0.0) || !(static_energy > 0.0)) throw Error("static means must be positive");
  return Reductions{(static_latency - adaptive_latency) / static_latency,
                    (static_energy - adaptive_energy) / static_energy};
}

std::vector<CheckResult> evaluate_checks(const SampleMeans& s, const SampleMeans& a) {
  return {
      {"adaptive-energy-below-static", "adaptive mean total energy is strictly below the static mean",
       a.total_energy_j < s.total_energy_j},
      {"adaptive-latency-within-5pct", "adaptive mean latency is at most 5% above the static mean",
       a.latency_s <= 1.05 * s.latency_s},
  };
}

const StrategyResult* ExperimentOutcome::find(std::string_view strategy) const {
  for (const auto& s : strategies) {
    if (s.strategy == strategy) return &s;
  }
  return nullptr;
}

ExperimentOutcome run_experiment(const ScenarioConfig& config, const RunOptions& options) {
  config.validate();
  const auto& e = config.experiment;
  SchedulerConfig sched = config.scheduler;
  sched.total_budget = e.budget;

  const bool want_single = e.mode == ExperimentMode::single_device || e.mode == ExperimentMode::compare;
  const bool want_static = e.mode == ExperimentMode::static_split || e.mode == ExperimentMode::compare;
  const bool want_adaptive = e.mode == ExperimentMode::adaptive || e.mode == ExperimentMode::compare;

  std::vector<Tier> single_tiers;
  if (e.mode == ExperimentMode::single_device) {
    single_tiers = {e.single_device_tier};
  } else if (want_single) {
    single_tiers.assign(kTiers.begin(), kTiers.end());
  }

  std::unique_ptr<LoopbackServer> server;
  if (options.loopback && want_adaptive) server = std::make_unique<LoopbackServer>();

  ExperimentOutcome out;
  out.scenario = config.name;
  out.experiment = e;
  std::vector<std::vector<SampleMeans>> single_reps(single_tiers.size());
  std::vector<SampleMeans> static_reps;
  std::vector<SampleMeans> adaptive_reps;

  for (int k = 0; k < e.repetitions; ++k) {
    const std::uint64_t base = e.seed + static_cast<std::uint64_t>(k);
    for (std::size_t t = 0; t < single_tiers.size(); ++t) {
      SimEnvironment env(seeded(config.sim, base + kSingleDeviceSeedOffset));
      single_reps[t].push_back(fixed_batch(e.budget, sched.k_warm, [&] {
        return env.run_single_device(single_tiers[t], config.profile);
      }));
    }
    if (want_static) {
      SimEnvironment env(seeded(config.sim, base));
      static_reps.push_back(fixed_batch(e.budget, sched.k_warm, [&] {
        return env.run_inference(sched.initial_split, config.profile);
      }));
    }
    if (want_adaptive) {
      SimEnvironment env(seeded(config.sim, base + kAdaptiveSeedOffset));
      if (server) {
        env.set_hop_transport(Hop::edge_fog, std::make_shared<LoopbackHop>("loopback:edge-fog", server->port()));
        env.set_hop_transport(Hop::fog_cloud, std::make_shared<LoopbackHop>("loopback:fog-cloud", server->port()));
      }
      auto report = run(sched, config.profile, env);
      adaptive_reps.push_back(report.steady_means);
      out.adaptive_runs.push_back(std::move(report));
    }
  }

  for (std::size_t t = 0; t < single_tiers.size(); ++t) {
    out.strategies.push_back(StrategyResult{fmt::format("single-device:{}", to_string(single_tiers[t])),
                                            average(single_reps[t]), single_reps[t]});
  }
  if (want_static) out.strategies.push_back(StrategyResult{"static", average(static_reps), static_reps});
  if (want_adaptive) out.strategies.push_back(StrategyResult{"adaptive", average(adaptive_reps), adaptive_reps});

  if (e.mode == ExperimentMode::compare) {
    const auto& s = out.find("static")->means;
    const auto& a = out.find("adaptive")->means;
    out.reductions = compute_reductions(s.latency_s, s.total_energy_j, a.latency_s, a.total_energy_j);
    out.checks = evaluate_checks(s, a);
  }
  return out;
}

std::string windows_csv(const ExperimentOutcome& outcome) {
  std::string csv =
      "window_index,split_i,split_j,mean_latency_ms,edge_energy_j,fog_energy_j,cloud_energy_j,total_energy_j,score,"
      "decision\n";
  if (outcome.adaptive_runs.empty()) return csv;
  for (const auto& w : outcome.adaptive_runs.front().windows) {
    csv += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", w.index, w.split.last_edge, w.split.last_fog,
                       num(w.means.latency_s * 1000.0), num(w.means.energy_j.edge), num(w.means.energy_j.fog),
                       num(w.means.energy_j.cloud), num(w.means.total_energy_j), num(w.current_score),
                       to_string(w.decision));
  }
  return csv;
}

std::string summary_csv(const ExperimentOutcome& outcome) {
  std::string csv = "strategy,repetitions,mean_latency_ms,edge_energy_j,fog_energy_j,cloud_energy_j,total_energy_j\n";
  for (const auto& s : outcome.strategies) {
    csv += fmt::format("{},{},{},{},{},{},{}\n", s.strategy, s.per_repetition.size(), num(s.means.latency_s * 1000.0),
                       num(s.means.energy_j.edge), num(s.means.energy_j.fog), num(s.means.energy_j.cloud),
                       num(s.means.total_energy_j));
  }
  return csv;
}

std::string comparison_text(const ExperimentOutcome& outcome) {
  std::string out = fmt::format("scenario: {}  mode: {}  budget: {}  repetitions: {}  seed: {}\n\n", outcome.scenario,
                                to_string(outcome.experiment), outcome.experiment.budget,
                                outcome.experiment.repetitions, outcome.experiment.seed);
  out += fmt::format("{:<22} {:>14} {:>12} {:>12} {:>12} {:>12}\n", "strategy", "latency [ms]", "edge [J]",
                     "fog [J]", "cloud [J]", "total [J]");
  for (const auto& s : outcome.strategies) {
    out += fmt::format("{:<22} {:>14.3f} {:>12.4f} {:>12.4f} {:>12.4f} {:>12.4f}\n", s.strategy,
                       s.means.latency_s * 1000.0, s.means.energy_j.edge, s.means.energy_j.fog,
                       s.means.energy_j.cloud, s.means.total_energy_j);
  }
  if (outcome.reductions) {
    out += fmt::format("\nadaptive vs static: latency reduction {:.2f} %, total energy reduction {:.2f} %\n",
                       outcome.reductions->latency * 100.0, outcome.reductions->total_energy * 100.0);
  }
  if (!outcome.checks.empty()) {
    out += "\n";
    for (const auto& c : outcome.checks) {
      out += fmt::format("[{}] {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.description);
    }
  }
  out +=
      "\nNote: these numbers come from a calibrated simulator. Only the direction of the differences "
      "(which strategy is faster or uses less energy) is meaningful; absolute magnitudes are not measurements.\n";
  return out;
}

void emit_reports(const ExperimentOutcome& outcome, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));
  auto write = [&](const char* name, const std::string& body) {
    const auto path = out_dir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << body;
    if (!f) throw Error(fmt::format("cannot write {}", path.string()));
  };
  write("windows.csv", windows_csv(outcome));
  write("summary.csv", summary_csv(outcome));
  write("comparison.txt", comparison_text(outcome));
}

}  // namespace edgesplit
