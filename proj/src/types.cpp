#include "edgesplit/types.hpp"

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit {

std::string_view to_string(Tier tier) {
  switch (tier) {
    case Tier::edge: return "edge";
    case Tier::fog: return "fog";
    case Tier::cloud: return "cloud";
  }
  return "?";
}

Tier tier_from_string(std::string_view name) {
  for (Tier t : kTiers) {
    if (to_string(t) == name) return t;
  }
  throw Error(fmt::format("unknown tier '{}' (expected edge, fog or cloud)", name));
}

std::string_view to_string(Hop hop) {
  switch (hop) {
    case Hop::edge_fog: return "edge-fog";
    case Hop::fog_cloud: return "fog-cloud";
  }
  throw UnknownHopError(fmt::format("unknown hop id {}", static_cast<int>(hop)));
}

Hop hop_from_string(std::string_view name) {
  if (name == "edge-fog" || name == "edge_fog") return Hop::edge_fog;
  if (name == "fog-cloud" || name == "fog_cloud") return Hop::fog_cloud;
  throw UnknownHopError(fmt::format("unknown hop '{}' (expected edge-fog or fog-cloud)", name));
}

std::string to_string(Split s) { return fmt::format("({},{})", s.last_edge, s.last_fog); }

bool is_valid_split(Split s, int n_features, int min_edge_layers) noexcept {
  return min_edge_layers >= 1 && s.last_edge >= min_edge_layers - 1 &&
         s.last_edge < s.last_fog && s.last_fog < n_features;
}

void require_valid_split(Split s, int n_features, int min_edge_layers) {
  if (min_edge_layers < 1) {
    throw InvalidSplitError(fmt::format("minimum edge layer count must be >= 1, got {}", min_edge_layers));
  }
  if (s.last_edge < min_edge_layers - 1) {
    throw InvalidSplitError(fmt::format("split {}: edge must run at least {} layer(s)", to_string(s),
                                        min_edge_layers));
  }
  if (s.last_edge >= s.last_fog) {
    throw InvalidSplitError(fmt::format("split {}: last edge layer must precede last fog layer", to_string(s)));
  }
  if (s.last_fog >= n_features) {
    throw InvalidSplitError(
        fmt::format("split {}: last fog layer must be below the feature count {}", to_string(s), n_features));
  }
}

}  // namespace edgesplit
