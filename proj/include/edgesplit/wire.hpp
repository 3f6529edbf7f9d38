#pragma once

// Loopback wire protocol. Every frame is
//   u32 big-endian length of what follows | u8 type | payload
// with payload layouts
//   PROBE      (0x01): u32 BE count | count arbitrary bytes
//   PROBE_ACK  (0x02): empty
//   ACTIVATION (0x03): u8 stage tag | u32 BE layer index | activation bytes
//   RESULT     (0x04): u64 BE latency in nanoseconds
// A receiver that sees any other type resets the connection.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace edgesplit::wire {

enum class MessageType : std::uint8_t { probe = 0x01, probe_ack = 0x02, activation = 0x03, result = 0x04 };

inline constexpr std::size_t kHeaderBytes = 5;
/// Frames larger than this are rejected as malformed.
inline constexpr std::uint32_t kMaxFrameBytes = 256u * 1024u * 1024u;

struct Probe {
  std::vector<std::uint8_t> payload;
  bool operator==(const Probe&) const = default;
};

struct ProbeAck {
  bool operator==(const ProbeAck&) const = default;
};

struct Activation {
  std::uint8_t stage = 0;
  std::uint32_t layer_index = 0;
  std::vector<std::uint8_t> bytes;
  bool operator==(const Activation&) const = default;
};

struct Result {
  std::uint64_t latency_ns = 0;
  bool operator==(const Result&) const = default;
};

using Message = std::variant<Probe, ProbeAck, Activation, Result>;

std::vector<std::uint8_t> encode(const Message& msg);

/// Decodes exactly one complete frame. Throws FramingError on an unknown
/// type, a length mismatch or a malformed payload.
Message decode(std::span<const std::uint8_t> frame);

/// Incremental decoder for a byte stream.
class FrameDecoder {
 public:
  void feed(std::span<const std::uint8_t> bytes);
  /// Next complete message, or nullopt if more bytes are needed.
  std::optional<Message> next();
  std::size_t buffered() const noexcept { return buffer_.size() - offset_; }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t offset_ = 0;
};

}  // namespace edgesplit::wire
