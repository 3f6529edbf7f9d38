#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "edgesplit/estimator.hpp"
#include "edgesplit/link.hpp"

namespace edgesplit {

/// What the scheduler needs from the world: run an inference at a split and
/// reach each hop for link probing.
class InferenceEnvironment {
 public:
  virtual ~InferenceEnvironment() = default;
  virtual InferenceSample run_inference(Split split, const ModelProfile& profile) = 0;
  virtual RttTransport& hop(Hop hop) = 0;
};

struct TracePoint {
  double effective_from_s = 0.0;
  double multiplier = 1.0;

  bool operator==(const TracePoint&) const = default;
};

/// Piecewise-constant multiplier schedule, timestamps strictly increasing.
using Trace = std::vector<TracePoint>;

/// Multiplier in force at time t: the last point with effective_from_s <= t,
/// or 1.0 before the first point.
double trace_multiplier(const Trace& trace, double t) noexcept;

/// Throws Error unless timestamps strictly increase and multipliers are > 0.
void validate_trace(const Trace& trace);

struct NodeSpec {
  double seconds_per_work = 1.0;  // whole-model time on this node
  double power_w = 1.0;
  Trace trace;  // scales seconds_per_work

  void validate() const;
  bool operator==(const NodeSpec&) const = default;
};

struct HopSpec {
  double overhead_s = 0.0;
  double throughput_bps = kMiB;
  Trace trace;  // scales throughput_bps

  void validate() const;
  bool operator==(const HopSpec&) const = default;
};

struct NoiseSpec {
  double sigma = 0.0;  // lognormal shape; 0 means exact durations
  std::uint64_t seed = 0;

  bool operator==(const NoiseSpec&) const = default;
};

struct SimConfig {
  PerTier<NodeSpec> nodes;
  HopSpec edge_fog;
  HopSpec fog_cloud;
  NoiseSpec noise;

  void validate() const;
  bool operator==(const SimConfig&) const = default;
};

/// Deterministic three-tier simulator on a virtual clock.
///
/// Every duration is multiplied by an independent lognormal factor
/// exp(sigma * Z). Within one inference the factors are drawn in a fixed
/// order: edge compute, edge-fog transfer, fog compute, fog-cloud transfer,
/// cloud compute, fog energy, cloud energy. Stages run back to back and
/// each stage uses the trace multipliers in force when it starts. Edge energy
/// is always kEdgePowerWatts times edge compute time; fog and cloud energy
/// use the node's power draw.
class SimEnvironment final : public InferenceEnvironment {
 public:
  explicit SimEnvironment(SimConfig config);
  SimEnvironment(const SimEnvironment&) = delete;
  SimEnvironment& operator=(const SimEnvironment&) = delete;

  InferenceSample run_inference(Split split, const ModelProfile& profile) override;
  RttTransport& hop(Hop hop) override;

  /// Whole model, head included, on one node with no transfers.
  InferenceSample run_single_device(Tier tier, const ModelProfile& profile);

  /// Simulated round trip of `payload_bytes` on a hop; advances the clock.
  double rtt(Hop hop, std::uint64_t payload_bytes);

  double now() const noexcept { return clock_s_; }
  /// Moves the clock forward; earlier times are ignored (the clock is monotone).
  void advance_to(double t) noexcept;
  /// Earliest trace event strictly after now(), if any.
  std::optional<double> next_event_time() const;
  /// Jumps to next_event_time(); returns false when no event remains.
  bool advance_to_next_event();

  /// Appends a trace point; its time must exceed the trace's last timestamp.
  void add_node_event(Tier tier, TracePoint point);
  void add_hop_event(Hop hop, TracePoint point);

  /// Routes a hop's round trips through an external transport (e.g. a
  /// loopback connection) instead of the virtual-clock model. Activation
  /// transfers inside run_inference stay simulated.
  void set_hop_transport(Hop hop, std::shared_ptr<RttTransport> transport);

  double current_seconds_per_work(Tier tier) const noexcept;
  double current_throughput(Hop hop) const;

  const SimConfig& config() const noexcept { return config_; }

 private:
  class SimHop final : public RttTransport {
   public:
    SimHop(SimEnvironment& env, Hop hop) : env_(&env), hop_(hop) {}
    std::string identity() const override;
    double round_trip(std::uint64_t payload_bytes) override { return env_->rtt(hop_, payload_bytes); }

   private:
    SimEnvironment* env_;
    Hop hop_;
  };

  double noise();
  const HopSpec& hop_spec(Hop hop) const;
  HopSpec& hop_spec(Hop hop);
  double transfer(Hop hop, double bytes);

  SimConfig config_;
  double clock_s_ = 0.0;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  SimHop edge_fog_hop_{*this, Hop::edge_fog};
  SimHop fog_cloud_hop_{*this, Hop::fog_cloud};
  std::shared_ptr<RttTransport> edge_fog_override_;
  std::shared_ptr<RttTransport> fog_cloud_override_;
};

}  // namespace edgesplit
