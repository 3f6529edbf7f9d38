#include "edgesplit/fixtures.hpp"

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit {

namespace {

struct ModelTables {
  ReferenceModel model;
  std::string_view name;
  std::string_view profile;
  Split static_split;
  PerTier<ReferenceMeasurement> single_device;
  ReferenceMeasurement static_run;
  ReferenceMeasurement adaptive_run;
  // Solved with solve_static_throughput(profile, single-device latencies,
  // static_split, kFixtureHopOverheadS, static_run.latency_ms / 1000).
  double hop_throughput_bps;
};

ReferenceMeasurement single(double latency_ms, Tier tier, double energy_j) {
  ReferenceMeasurement m;
  m.latency_ms = latency_ms;
  m.energy_j[tier] = energy_j;
  m.total_energy_j = energy_j;
  return m;
}

ReferenceMeasurement split_run(double latency_ms, double edge_j, double fog_j, double cloud_j, double total_j) {
  return ReferenceMeasurement{latency_ms, {edge_j, fog_j, cloud_j}, total_j};
}

const std::array<ModelTables, 3>& tables() {
  static const std::array<ModelTables, 3> kTables{{
      {ReferenceModel::vgg16, "vgg16", "vgg16-like", Split{10, 30},
       {single(666.870, Tier::edge, 8.002), single(169.908, Tier::fog, 2.549), single(1.164, Tier::cloud, 0.037)},
       split_run(525.142, 2.297, 2.491, 0.905, 5.693), split_run(491.855, 1.489, 1.235, 0.930, 3.654),
       15762765.027439341},
      {ReferenceModel::alexnet, "alexnet", "alexnet-like", Split{9, 13},
       {single(132.400, Tier::edge, 1.589), single(20.988, Tier::fog, 0.315), single(0.830, Tier::cloud, 0.024)},
       split_run(78.148, 0.237, 0.082, 0.356, 0.675), split_run(60.233, 0.078, 0.097, 0.259, 0.434),
       4894508.1799900793},
      {ReferenceModel::mobilenetv2, "mobilenetv2", "mobilenetv2-like", Split{9, 18},
       {single(71.900, Tier::edge, 0.863), single(15.954, Tier::fog, 0.239), single(4.175, Tier::cloud, 0.092)},
       split_run(98.457, 0.624, 0.268, 0.027, 0.919), split_run(84.479, 0.494, 0.078, 0.099, 0.670),
       7906252.7798370291},
  }};
  return kTables;
}

const ModelTables& lookup(ReferenceModel model) {
  for (const auto& t : tables()) {
    if (t.model == model) return t;
  }
  throw UnknownFixtureError(fmt::format("unknown reference model id {}", static_cast<int>(model)));
}

}  // namespace

std::string_view to_string(ReferenceModel model) { return lookup(model).name; }

ReferenceModel reference_model_from_string(std::string_view name) {
  for (const auto& t : tables()) {
    if (t.name == name) return t.model;
  }
  throw UnknownFixtureError(fmt::format("unknown scenario fixture '{}'; known: vgg16, alexnet, mobilenetv2", name));
}

std::string_view profile_name(ReferenceModel model) { return lookup(model).profile; }

ReferenceMeasurement reference_single_device(ReferenceModel model, Tier tier) {
  return lookup(model).single_device[tier];
}
ReferenceMeasurement reference_static(ReferenceModel model) { return lookup(model).static_run; }
ReferenceMeasurement reference_adaptive(ReferenceModel model) { return lookup(model).adaptive_run; }
Split reference_static_split(ReferenceModel model) { return lookup(model).static_split; }

double solve_static_throughput(const ModelProfile& profile, const PerTier<double>& seconds_per_work, Split static_split,
                               double overhead_s, double target_latency_s) {
  require_valid_split(static_split, profile.feature_count());
  const auto shares = work_shares(profile, static_split);
  double fixed = 2.0 * overhead_s;
  for (Tier t : kTiers) fixed += seconds_per_work[t] * shares[t];
  const auto bytes = profile.activation_bytes();
  const double payload = static_cast<double>(bytes[static_cast<std::size_t>(static_split.last_edge)]) +
                         static_cast<double>(bytes[static_cast<std::size_t>(static_split.last_fog)]);
  const double transfer_budget = target_latency_s - fixed;
  if (!(transfer_budget > 0.0)) {
    throw Error(fmt::format("profile '{}': compute and overhead ({:.6g} s) leave no time for transfers within {:.6g} s",
                            profile.name(), fixed, target_latency_s));
  }
  return payload / transfer_budget;
}

ScenarioFixture paper_scenario(ReferenceModel model) {
  const ModelTables& t = lookup(model);
  ScenarioFixture fx{std::string(t.name), preset_profile(t.profile), {}, {}, {}};
  for (Tier tier : kTiers) {
    const auto& ref = t.single_device[tier];
    fx.sim.nodes[tier].seconds_per_work = ref.latency_ms / 1000.0;
    fx.sim.nodes[tier].power_w =
        tier == Tier::edge ? kEdgePowerWatts : ref.energy_j[tier] / fx.sim.nodes[tier].seconds_per_work;
  }
  fx.sim.edge_fog = HopSpec{kFixtureHopOverheadS, t.hop_throughput_bps, {}};
  fx.sim.fog_cloud = HopSpec{kFixtureHopOverheadS, t.hop_throughput_bps, {}};
  fx.sim.noise = NoiseSpec{0.01, 0};

  fx.scheduler.initial_split = t.static_split;
  fx.scheduler.deadline_s = t.static_run.latency_ms / 1000.0;
  fx.checks = {
      {"adaptive-energy-below-static", "adaptive mean total energy is strictly below the static mean"},
      {"adaptive-latency-within-5pct", "adaptive mean latency is at most 5% above the static mean"},
  };
  return fx;
}

ScenarioFixture paper_scenario(std::string_view model) { return paper_scenario(reference_model_from_string(model)); }

ScenarioFixture link_drop_scenario() {
  // Early cuts ship large activations; the pooled cut at layer 3 ships little.
  ModelProfile profile("link-drop-6", {4'000'000, 2'000'000, 2'000'000, 100'000, 100'000, 50'000},
                       {0.05, 0.10, 0.10, 0.15, 0.20, 0.20, 0.20},
                       {"0:stem", "1:block", "2:block", "3:pool", "4:block", "5:block"});
  ScenarioFixture fx{"link-drop", std::move(profile), {}, {}, {}};
  fx.sim.nodes.edge = NodeSpec{0.60, kEdgePowerWatts, {}};
  fx.sim.nodes.fog = NodeSpec{0.15, 15.0, {}};
  fx.sim.nodes.cloud = NodeSpec{0.01, 30.0, {}};
  fx.sim.edge_fog = HopSpec{0.002, 40e6, {}};
  fx.sim.fog_cloud = HopSpec{0.002, 40e6, {}};
  fx.sim.noise = NoiseSpec{0.01, 0};
  fx.scheduler.initial_split = Split{4, 5};
  fx.scheduler.weights = ObjectiveWeights{0.6, 0.2, 0.2};
  fx.checks = {{"split-moves-after-drop", "the split changes within two windows of the throughput drop"}};
  return fx;
}

}  // namespace edgesplit
