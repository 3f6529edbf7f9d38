#pragma once

#include <span>

#include "edgesplit/link.hpp"
#include "edgesplit/model_profile.hpp"
#include "edgesplit/types.hpp"

namespace edgesplit {

/// Power the edge device is charged at per second of compute, by convention.
inline constexpr double kEdgePowerWatts = 12.0;

/// Per-node execution and energy rates. seconds_per_work[t] is the time node
/// t needs for the whole model (weight share 1). watts.edge is the fixed edge
/// power model; watts.fog / watts.cloud are fitted.
struct NodeRates {
  PerTier<double> seconds_per_work{1.0, 1.0, 1.0};
  PerTier<double> watts{kEdgePowerWatts, 0.0, 0.0};

  /// Throws Error unless every rate > 0, fog/cloud watts >= 0, edge watts > 0.
  void validate() const;
  bool operator==(const NodeRates&) const = default;
};

struct SplitEstimate {
  double latency_s = 0.0;
  PerTier<double> energy_j;
  double total_energy_j = 0.0;
  PerTier<double> compute_s;
  double edge_fog_transfer_s = 0.0;
  double fog_cloud_transfer_s = 0.0;
};

/// One executed inference. Compute and transfer times are recorded apart so
/// rate fitting sees pure compute time.
struct InferenceSample {
  Split split;
  PerTier<double> compute_s;
  PerTier<double> energy_j;
  double edge_fog_transfer_s = 0.0;
  double fog_cloud_transfer_s = 0.0;
  double latency_s = 0.0;
  double timestamp_s = 0.0;

  double total_energy_j() const noexcept { return energy_j.edge + energy_j.fog + energy_j.cloud; }
  bool operator==(const InferenceSample&) const = default;
};

/// Fraction of total work each node runs under `split`; the head is always on
/// the cloud. The three shares sum to 1.
PerTier<double> work_shares(const ModelProfile& profile, Split split);

SplitEstimate estimate_split(Split split, const ModelProfile& profile, const NodeRates& rates,
                             const LinkModel& edge_fog, const LinkModel& fog_cloud);

/// Seconds-per-work by least squares through the origin over (share, time)
/// pairs; fog/cloud watts as total energy over total compute time. Raises
/// RateFitCoverageError when a node never ran any work in `samples`.
NodeRates fit_rates(std::span<const InferenceSample> samples, const ModelProfile& profile,
                    double edge_watts = kEdgePowerWatts);

}  // namespace edgesplit
