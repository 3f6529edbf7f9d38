#pragma once

#include <cstdint>
#include <string>

namespace edgesplit {

inline constexpr double kMiB = 1024.0 * 1024.0;

/// Affine hop model: transfer(s) = overhead_s + s / throughput_bps.
struct LinkModel {
  double overhead_s = 0.0;
  double throughput_bps = kMiB;  // bytes per second
  bool fitted = false;           // false until a probe succeeded

  bool operator==(const LinkModel&) const = default;
};

/// Pessimistic stand-in used before the first successful probe (0 s, 1 MiB/s).
inline constexpr LinkModel kUnfittedLink{0.0, kMiB, false};

struct ProbeConfig {
  std::uint64_t small_bytes = 1024;
  std::uint64_t large_bytes = 1024 * 1024;
  int repeats = 5;

  /// Throws Error unless 0 < small < large and repeats >= 1.
  void validate() const;
  bool operator==(const ProbeConfig&) const = default;
};

double predict_transfer_time(const LinkModel& link, double payload_bytes) noexcept;

/// Two-point fit from averaged round-trip times. A probe where the large
/// payload was not slower than the small one returns `previous` untouched.
LinkModel fit_link_model(double tau_small, double tau_large, const ProbeConfig& cfg, const LinkModel& previous);

/// Anything that can bounce a payload across a hop and time it.
class RttTransport {
 public:
  virtual ~RttTransport() = default;
  virtual std::string identity() const = 0;
  /// Round-trip seconds for `payload_bytes`. Throws TransportError on failure.
  virtual double round_trip(std::uint64_t payload_bytes) = 0;
};

/// Averages `repeats` successful round trips per size, then fits. Failed
/// repeats are skipped; if every repeat of a size fails the probe raises
/// LinkProbeTransportError carrying the hop identity.
LinkModel probe_link(RttTransport& hop, const ProbeConfig& cfg, const LinkModel& previous);

}  // namespace edgesplit
