#include "edgesplit/simenv.hpp"

#include <cmath>

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit {

double trace_multiplier(const Trace& trace, double t) noexcept {
  double m = 1.0;
  for (const auto& p : trace) {
    if (p.effective_from_s > t) break;
    m = p.multiplier;
  }
  return m;
}

void validate_trace(const Trace& trace) {
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (!(trace[k].multiplier > 0.0) || !std::isfinite(trace[k].multiplier)) {
      throw Error(fmt::format("trace[{}]: multiplier must be > 0", k));
    }
    if (!std::isfinite(trace[k].effective_from_s)) throw Error(fmt::format("trace[{}]: time must be finite", k));
    if (k > 0 && !(trace[k].effective_from_s > trace[k - 1].effective_from_s)) {
      throw Error(fmt::format("trace[{}]: timestamps must be strictly increasing", k));
    }
  }
}

void NodeSpec::validate() const {
  if (!(seconds_per_work > 0.0) || !std::isfinite(seconds_per_work)) {
    throw Error("node seconds per work must be > 0");
  }
  if (!(power_w > 0.0) || !std::isfinite(power_w)) throw Error("node power must be > 0");
  validate_trace(trace);
}

void HopSpec::validate() const {
  if (!(overhead_s >= 0.0) || !std::isfinite(overhead_s)) throw Error("hop overhead must be >= 0");
  if (!(throughput_bps > 0.0) || !std::isfinite(throughput_bps)) throw Error("hop throughput must be > 0");
  validate_trace(trace);
}

void SimConfig::validate() const {
  for (Tier t : kTiers) {
    try {
      nodes[t].validate();
    } catch (const Error& e) {
      throw Error(fmt::format("{} node: {}", to_string(t), e.what()));
    }
  }
  edge_fog.validate();
  fog_cloud.validate();
  if (!(noise.sigma >= 0.0) || !std::isfinite(noise.sigma)) throw Error("noise sigma must be >= 0");
}

SimEnvironment::SimEnvironment(SimConfig config) : config_(std::move(config)), rng_(config_.noise.seed) {
  config_.validate();
}

std::string SimEnvironment::SimHop::identity() const { return fmt::format("sim:{}", to_string(hop_)); }

double SimEnvironment::noise() {
  if (config_.noise.sigma == 0.0) return 1.0;
  return std::exp(config_.noise.sigma * normal_(rng_));
}

const HopSpec& SimEnvironment::hop_spec(Hop hop) const {
  switch (hop) {
    case Hop::edge_fog: return config_.edge_fog;
    case Hop::fog_cloud: return config_.fog_cloud;
  }
  throw UnknownHopError(fmt::format("unknown hop id {}", static_cast<int>(hop)));
}

HopSpec& SimEnvironment::hop_spec(Hop hop) {
  return const_cast<HopSpec&>(static_cast<const SimEnvironment&>(*this).hop_spec(hop));
}

double SimEnvironment::current_seconds_per_work(Tier tier) const noexcept {
  const auto& node = config_.nodes[tier];
  return node.seconds_per_work * trace_multiplier(node.trace, clock_s_);
}

double SimEnvironment::current_throughput(Hop hop) const {
  const auto& spec = hop_spec(hop);
  return spec.throughput_bps * trace_multiplier(spec.trace, clock_s_);
}

double SimEnvironment::transfer(Hop hop, double bytes) {
  const double d = (hop_spec(hop).overhead_s + bytes / current_throughput(hop)) * noise();
  clock_s_ += d;
  return d;
}

InferenceSample SimEnvironment::run_inference(Split split, const ModelProfile& profile) {
  require_valid_split(split, profile.feature_count());
  const auto shares = work_shares(profile, split);
  const auto bytes = profile.activation_bytes();

  InferenceSample s;
  s.split = split;
  s.timestamp_s = clock_s_;

  auto compute = [&](Tier t) {
    const double d = current_seconds_per_work(t) * shares[t] * noise();
    clock_s_ += d;
    return d;
  };
  s.compute_s.edge = compute(Tier::edge);
  s.edge_fog_transfer_s = transfer(Hop::edge_fog, static_cast<double>(bytes[static_cast<std::size_t>(split.last_edge)]));
  s.compute_s.fog = compute(Tier::fog);
  s.fog_cloud_transfer_s =
      transfer(Hop::fog_cloud, static_cast<double>(bytes[static_cast<std::size_t>(split.last_fog)]));
  s.compute_s.cloud = compute(Tier::cloud);

  s.energy_j.edge = kEdgePowerWatts * s.compute_s.edge;
  s.energy_j.fog = config_.nodes.fog.power_w * s.compute_s.fog * noise();
  s.energy_j.cloud = config_.nodes.cloud.power_w * s.compute_s.cloud * noise();
  s.latency_s = s.compute_s.edge + s.edge_fog_transfer_s + s.compute_s.fog + s.fog_cloud_transfer_s + s.compute_s.cloud;
  return s;
}

InferenceSample SimEnvironment::run_single_device(Tier tier, const ModelProfile& profile) {
  InferenceSample s;
  // The split field is meaningless here; keep a well-formed placeholder.
  s.split = Split{0, std::max(1, profile.feature_count() - 1)};
  s.timestamp_s = clock_s_;
  const double d = current_seconds_per_work(tier) * noise();
  clock_s_ += d;
  s.compute_s[tier] = d;
  s.energy_j[tier] = tier == Tier::edge ? kEdgePowerWatts * d : config_.nodes[tier].power_w * d * noise();
  s.latency_s = d;
  return s;
}

double SimEnvironment::rtt(Hop hop, std::uint64_t payload_bytes) {
  return transfer(hop, static_cast<double>(payload_bytes));
}

RttTransport& SimEnvironment::hop(Hop hop) {
  switch (hop) {
    case Hop::edge_fog: return edge_fog_override_ ? *edge_fog_override_ : edge_fog_hop_;
    case Hop::fog_cloud: return fog_cloud_override_ ? *fog_cloud_override_ : fog_cloud_hop_;
  }
  throw UnknownHopError(fmt::format("unknown hop id {}", static_cast<int>(hop)));
}

void SimEnvironment::set_hop_transport(Hop hop, std::shared_ptr<RttTransport> transport) {
  switch (hop) {
    case Hop::edge_fog: edge_fog_override_ = std::move(transport); return;
    case Hop::fog_cloud: fog_cloud_override_ = std::move(transport); return;
  }
  throw UnknownHopError(fmt::format("unknown hop id {}", static_cast<int>(hop)));
}

void SimEnvironment::advance_to(double t) noexcept {
  if (t > clock_s_) clock_s_ = t;
}

std::optional<double> SimEnvironment::next_event_time() const {
  std::optional<double> next;
  auto scan = [&](const Trace& trace) {
    for (const auto& p : trace) {
      if (p.effective_from_s > clock_s_) {
        if (!next || p.effective_from_s < *next) next = p.effective_from_s;
        break;
      }
    }
  };
  for (Tier t : kTiers) scan(config_.nodes[t].trace);
  scan(config_.edge_fog.trace);
  scan(config_.fog_cloud.trace);
  return next;
}

bool SimEnvironment::advance_to_next_event() {
  const auto next = next_event_time();
  if (!next) return false;
  advance_to(*next);
  return true;
}

namespace {

void append_event(Trace& trace, TracePoint point) {
  Trace candidate = trace;
  candidate.push_back(point);
  validate_trace(candidate);
  trace = std::move(candidate);
}

}  // namespace

void SimEnvironment::add_node_event(Tier tier, TracePoint point) { append_event(config_.nodes[tier].trace, point); }

void SimEnvironment::add_hop_event(Hop hop, TracePoint point) { append_event(hop_spec(hop).trace, point); }

}  // namespace edgesplit
