#include "edgesplit/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit {

void ObjectiveSpec::validate() const {
  const auto& w = weights;
  if (!(w.edge_energy >= 0.0 && w.total_energy >= 0.0 && w.latency >= 0.0)) {
    throw Error("objective weights must be >= 0");
  }
  if (!(w.edge_energy + w.total_energy + w.latency > 0.0)) throw Error("objective weights must not all be zero");
  if (!(anchors.edge_energy_j > 0.0 && anchors.total_energy_j > 0.0 && anchors.latency_s > 0.0)) {
    throw Error("normalization anchors must be > 0");
  }
  if (!(deadline_s >= 0.0)) throw Error("deadline must be >= 0");
  if (min_edge_layers < 1) throw Error("minimum edge layer count must be >= 1");
}

double score(const SplitEstimate& est, const ObjectiveWeights& weights, const Anchors& anchors) noexcept {
  return weights.edge_energy * (est.energy_j.edge / anchors.edge_energy_j) +
         weights.total_energy * (est.total_energy_j / anchors.total_energy_j) +
         weights.latency * (est.latency_s / anchors.latency_s);
}

std::vector<Split> enumerate_candidates(int n_features, int min_edge_layers, std::optional<Split> current) {
  if (min_edge_layers < 1 || n_features - min_edge_layers + 1 < 2) {
    throw EmptyCandidateSpaceError(fmt::format("no valid split for {} feature layers with at least {} on the edge",
                                               n_features, min_edge_layers));
  }
  std::vector<Split> out;
  const int span = n_features - min_edge_layers + 1;
  out.reserve(static_cast<std::size_t>(span) * static_cast<std::size_t>(span - 1) / 2);
  for (int i = min_edge_layers - 1; i < n_features; ++i) {
    for (int j = i + 1; j < n_features; ++j) {
      const Split s{i, j};
      if (current && *current == s) continue;
      out.push_back(s);
    }
  }
  return out;
}

std::optional<Split> find_best(const ModelProfile& profile, const NodeRates& rates, const LinkPair& links,
                               const ObjectiveSpec& spec, std::optional<Split> current) {
  constexpr double kTieTolerance = 1e-12;
  struct Survivor {
    Split split;
    double score;
  };
  std::vector<Survivor> survivors;
  double min_score = std::numeric_limits<double>::infinity();
  for (const Split s : enumerate_candidates(profile.feature_count(), spec.min_edge_layers, current)) {
    const SplitEstimate est = estimate_split(s, profile, rates, links.edge_fog, links.fog_cloud);
    if (spec.deadline_s > 0.0 && est.latency_s > spec.deadline_s) continue;
    const double sc = score(est, spec);
    if (sc > spec.baseline_score) continue;
    survivors.push_back({s, sc});
    min_score = std::min(min_score, sc);
  }
  // Candidates arrive in lexicographic order, so the first near-minimal one wins ties.
  for (const auto& sv : survivors) {
    if (sv.score <= min_score + kTieTolerance) return sv.split;
  }
  return std::nullopt;
}

}  // namespace edgesplit
