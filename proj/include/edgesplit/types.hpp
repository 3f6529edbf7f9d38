#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>

namespace edgesplit {

enum class Tier { edge, fog, cloud };

inline constexpr std::array<Tier, 3> kTiers{Tier::edge, Tier::fog, Tier::cloud};

std::string_view to_string(Tier tier);
Tier tier_from_string(std::string_view name);

/// One value per tier, indexable by Tier.
template <class T>
struct PerTier {
  T edge{};
  T fog{};
  T cloud{};

  constexpr T& operator[](Tier t) {
    switch (t) {
      case Tier::edge: return edge;
      case Tier::fog: return fog;
      default: return cloud;
    }
  }
  constexpr const T& operator[](Tier t) const {
    switch (t) {
      case Tier::edge: return edge;
      case Tier::fog: return fog;
      default: return cloud;
    }
  }
  bool operator==(const PerTier&) const = default;
};

enum class Hop { edge_fog, fog_cloud };

inline constexpr std::array<Hop, 2> kHops{Hop::edge_fog, Hop::fog_cloud};

std::string_view to_string(Hop hop);
/// Accepts "edge-fog"/"edge_fog" and "fog-cloud"/"fog_cloud".
Hop hop_from_string(std::string_view name);

/// Three-tier cut: feature layers 0..last_edge run on the edge,
/// last_edge+1..last_fog on the fog, the rest plus the head on the cloud.
struct Split {
  int last_edge = 0;
  int last_fog = 1;

  auto operator<=>(const Split&) const = default;
};

std::string to_string(Split s);

/// m-1 <= last_edge < last_fog < n_features.
bool is_valid_split(Split s, int n_features, int min_edge_layers = 1) noexcept;

/// Throws InvalidSplitError naming the violated bound.
void require_valid_split(Split s, int n_features, int min_edge_layers = 1);

}  // namespace edgesplit
