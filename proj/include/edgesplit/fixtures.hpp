#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "edgesplit/scheduler.hpp"
#include "edgesplit/simenv.hpp"

namespace edgesplit {

enum class ReferenceModel { vgg16, alexnet, mobilenetv2 };

inline constexpr std::array<ReferenceModel, 3> kReferenceModels{ReferenceModel::vgg16, ReferenceModel::alexnet,
                                                                 ReferenceModel::mobilenetv2};

std::string_view to_string(ReferenceModel model);
/// Accepts "vgg16", "alexnet", "mobilenetv2"; anything else raises UnknownFixtureError.
ReferenceModel reference_model_from_string(std::string_view name);
/// Name of the committed profile fixture backing a reference model.
std::string_view profile_name(ReferenceModel model);

/// Per-inference means as published for the reference testbed.
struct ReferenceMeasurement {
  double latency_ms = 0.0;
  PerTier<double> energy_j;
  double total_energy_j = 0.0;
};

/// Whole model on one node.
ReferenceMeasurement reference_single_device(ReferenceModel model, Tier tier);
ReferenceMeasurement reference_static(ReferenceModel model);
ReferenceMeasurement reference_adaptive(ReferenceModel model);
/// Static cut points used on the reference testbed.
Split reference_static_split(ReferenceModel model);

struct DirectionCheck {
  std::string name;
  std::string description;
};

/// Ground truth for the simulator plus scheduler settings for one scenario.
struct ScenarioFixture {
  std::string name;
  ModelProfile profile;
  SimConfig sim;
  SchedulerConfig scheduler;
  std::vector<DirectionCheck> checks;
};

/// Overhead charged on both hops of the reference fixtures.
inline constexpr double kFixtureHopOverheadS = 0.002;

/// Throughput shared by both hops such that the noiseless static-split
/// latency equals `target_latency_s`, given each hop's fixed overhead.
/// Throws Error when compute plus overhead alone already exceed the target.
double solve_static_throughput(const ModelProfile& profile, const PerTier<double>& seconds_per_work, Split static_split,
                               double overhead_s, double target_latency_s);

/// Simulator truth from the single-device table: seconds_per_work per node is
/// the single-device latency, power is single-device energy over latency
/// (12 W on the edge), hops use the recorded solved throughput, the static
/// split is the initial split and its reference latency is the deadline.
ScenarioFixture paper_scenario(ReferenceModel model);
ScenarioFixture paper_scenario(std::string_view model);

/// Synthetic scenario for link-degradation experiments: a six-layer model
/// whose best split moves once the edge-fog throughput collapses.
ScenarioFixture link_drop_scenario();

}  // namespace edgesplit
