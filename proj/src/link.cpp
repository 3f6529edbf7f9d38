#include "edgesplit/link.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit {

void ProbeConfig::validate() const {
  if (small_bytes == 0 || small_bytes >= large_bytes) {
    throw Error(fmt::format("probe sizes must satisfy 0 < small < large, got {} and {}", small_bytes, large_bytes));
  }
  if (repeats < 1) throw Error(fmt::format("probe repeat count must be >= 1, got {}", repeats));
}

double predict_transfer_time(const LinkModel& link, double payload_bytes) noexcept {
  return link.overhead_s + payload_bytes / link.throughput_bps;
}

LinkModel fit_link_model(double tau_small, double tau_large, const ProbeConfig& cfg, const LinkModel& previous) {
  if (!std::isfinite(tau_small) || !std::isfinite(tau_large) || !(tau_small > 0.0) || tau_large <= tau_small) {
    return previous;
  }
  const double s1 = static_cast<double>(cfg.small_bytes);
  const double s2 = static_cast<double>(cfg.large_bytes);
  const double throughput = (s2 - s1) / (tau_large - tau_small);
  if (!std::isfinite(throughput) || !(throughput > 0.0)) return previous;
  return LinkModel{std::max(0.0, tau_small - s1 / throughput), throughput, true};
}

namespace {

double mean_round_trip(RttTransport& hop, std::uint64_t bytes, int repeats) {
  double sum = 0.0;
  int ok = 0;
  std::string last_error;
  for (int k = 0; k < repeats; ++k) {
    try {
      sum += hop.round_trip(bytes);
      ++ok;
    } catch (const TransportError& e) {
      last_error = e.what();
    }
  }
  if (ok == 0) {
    throw LinkProbeTransportError(hop.identity(), fmt::format("hop {}: all {} round trips of {} bytes failed ({})",
                                                              hop.identity(), repeats, bytes, last_error));
  }
  return sum / ok;
}

}  // namespace

LinkModel probe_link(RttTransport& hop, const ProbeConfig& cfg, const LinkModel& previous) {
  cfg.validate();
  const double tau_small = mean_round_trip(hop, cfg.small_bytes, cfg.repeats);
  const double tau_large = mean_round_trip(hop, cfg.large_bytes, cfg.repeats);
  return fit_link_model(tau_small, tau_large, cfg, previous);
}

}  // namespace edgesplit
