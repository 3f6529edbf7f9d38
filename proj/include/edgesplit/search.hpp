#pragma once

#include <optional>
#include <vector>

#include "edgesplit/estimator.hpp"

namespace edgesplit {

struct ObjectiveWeights {
  double edge_energy = 0.7;
  double total_energy = 0.2;
  double latency = 0.1;

  bool operator==(const ObjectiveWeights&) const = default;
};

/// Normalization constants that make the score dimensionless.
struct Anchors {
  double edge_energy_j = 1.0;
  double total_energy_j = 1.0;
  double latency_s = 1.0;

  bool operator==(const Anchors&) const = default;
};

struct ObjectiveSpec {
  ObjectiveWeights weights;
  Anchors anchors;
  double baseline_score = 0.0;  // candidates scoring above this are dropped
  double deadline_s = 0.0;      // 0 disables the deadline filter
  int min_edge_layers = 1;

  void validate() const;
};

struct LinkPair {
  LinkModel edge_fog = kUnfittedLink;
  LinkModel fog_cloud = kUnfittedLink;

  bool operator==(const LinkPair&) const = default;
};

/// Weighted normalized sum of edge energy, total energy and latency.
double score(const SplitEstimate& est, const ObjectiveWeights& weights, const Anchors& anchors) noexcept;
inline double score(const SplitEstimate& est, const ObjectiveSpec& spec) noexcept {
  return score(est, spec.weights, spec.anchors);
}

/// Every valid (i, j) in lexicographic order, minus `current`.
/// Throws EmptyCandidateSpaceError when no valid pair exists.
std::vector<Split> enumerate_candidates(int n_features, int min_edge_layers,
                                        std::optional<Split> current = std::nullopt);

/// Exhaustive search: drops candidates whose estimated latency exceeds the
/// deadline (when set) or whose score exceeds the baseline score, and returns
/// the lowest-scoring survivor. Scores within 1e-12 tie toward the
/// lexicographically smallest split.
std::optional<Split> find_best(const ModelProfile& profile, const NodeRates& rates, const LinkPair& links,
                               const ObjectiveSpec& spec, std::optional<Split> current = std::nullopt);

}  // namespace edgesplit
