#include "edgesplit/estimator.hpp"

#include <cmath>

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit {

void NodeRates::validate() const {
  for (Tier t : kTiers) {
    if (!(seconds_per_work[t] > 0.0) || !std::isfinite(seconds_per_work[t])) {
      throw Error(fmt::format("{} seconds per work must be > 0, got {}", to_string(t), seconds_per_work[t]));
    }
  }
  if (!(watts.edge > 0.0)) throw Error(fmt::format("edge power must be > 0, got {}", watts.edge));
  if (!(watts.fog >= 0.0) || !(watts.cloud >= 0.0)) throw Error("fog and cloud power must be >= 0");
}

PerTier<double> work_shares(const ModelProfile& profile, Split split) {
  const int n = profile.feature_count();
  return {profile.weight_sum(0, split.last_edge), profile.weight_sum(split.last_edge + 1, split.last_fog),
          profile.weight_sum(split.last_fog + 1, n)};
}

SplitEstimate estimate_split(Split split, const ModelProfile& profile, const NodeRates& rates,
                             const LinkModel& edge_fog, const LinkModel& fog_cloud) {
  require_valid_split(split, profile.feature_count());
  const auto shares = work_shares(profile, split);
  const auto bytes = profile.activation_bytes();

  SplitEstimate est;
  for (Tier t : kTiers) {
    est.compute_s[t] = rates.seconds_per_work[t] * shares[t];
    est.energy_j[t] = rates.watts[t] * est.compute_s[t];
  }
  est.edge_fog_transfer_s =
      predict_transfer_time(edge_fog, static_cast<double>(bytes[static_cast<std::size_t>(split.last_edge)]));
  est.fog_cloud_transfer_s =
      predict_transfer_time(fog_cloud, static_cast<double>(bytes[static_cast<std::size_t>(split.last_fog)]));
  est.latency_s = est.compute_s.edge + est.compute_s.fog + est.compute_s.cloud + est.edge_fog_transfer_s +
                  est.fog_cloud_transfer_s;
  est.total_energy_j = est.energy_j.edge + est.energy_j.fog + est.energy_j.cloud;
  return est;
}

NodeRates fit_rates(std::span<const InferenceSample> samples, const ModelProfile& profile, double edge_watts) {
  PerTier<double> time_x_share{};
  PerTier<double> share_sq{};
  PerTier<double> energy_sum{};
  PerTier<double> time_sum{};

  for (const auto& s : samples) {
    require_valid_split(s.split, profile.feature_count());
    const auto shares = work_shares(profile, s.split);
    for (Tier t : kTiers) {
      time_x_share[t] += s.compute_s[t] * shares[t];
      share_sq[t] += shares[t] * shares[t];
      if (s.compute_s[t] > 0.0) {
        energy_sum[t] += s.energy_j[t];
        time_sum[t] += s.compute_s[t];
      }
    }
  }

  NodeRates rates;
  rates.watts.edge = edge_watts;
  for (Tier t : kTiers) {
    if (!(share_sq[t] > 0.0) || !(time_x_share[t] > 0.0)) {
      throw RateFitCoverageError(std::string(to_string(t)),
                                 fmt::format("cannot fit {} rate: no sample ran work on that node", to_string(t)));
    }
    rates.seconds_per_work[t] = time_x_share[t] / share_sq[t];
    if (t != Tier::edge) rates.watts[t] = energy_sum[t] / time_sum[t];
  }
  return rates;
}

}  // namespace edgesplit
