#include "edgesplit/wire.hpp"

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit::wire {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in) {
  return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) | (std::uint32_t{in[2]} << 8) | in[3];
}

std::uint64_t get_u64(std::span<const std::uint8_t> in) {
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < 8; ++k) v = (v << 8) | in[k];
  return v;
}

struct Encoder {
  std::vector<std::uint8_t>& out;

  void operator()(const Probe& m) const {
    out.push_back(static_cast<std::uint8_t>(MessageType::probe));
    put_u32(out, static_cast<std::uint32_t>(m.payload.size()));
    out.insert(out.end(), m.payload.begin(), m.payload.end());
  }
  void operator()(const ProbeAck&) const { out.push_back(static_cast<std::uint8_t>(MessageType::probe_ack)); }
  void operator()(const Activation& m) const {
    out.push_back(static_cast<std::uint8_t>(MessageType::activation));
    out.push_back(m.stage);
    put_u32(out, m.layer_index);
    out.insert(out.end(), m.bytes.begin(), m.bytes.end());
  }
  void operator()(const Result& m) const {
    out.push_back(static_cast<std::uint8_t>(MessageType::result));
    put_u64(out, m.latency_ns);
  }
};

}  // namespace

std::vector<std::uint8_t> encode(const Message& msg) {
  std::vector<std::uint8_t> body;
  std::visit(Encoder{body}, msg);
  if (body.size() > kMaxFrameBytes) throw FramingError(fmt::format("frame of {} bytes exceeds limit", body.size()));
  std::vector<std::uint8_t> frame;
  frame.reserve(4 + body.size());
  put_u32(frame, static_cast<std::uint32_t>(body.size()));
  frame.insert(frame.end(), body.begin(), body.end());
  return frame;
}

Message decode(std::span<const std::uint8_t> frame) {
  if (frame.size() < kHeaderBytes) throw FramingError("frame shorter than header");
  const std::uint32_t length = get_u32(frame);
  if (length == 0 || length > kMaxFrameBytes) throw FramingError(fmt::format("invalid frame length {}", length));
  if (frame.size() != 4 + std::size_t{length}) {
    throw FramingError(fmt::format("frame length field {} does not match {} bytes", length, frame.size() - 4));
  }
  const std::uint8_t type = frame[4];
  const auto payload = frame.subspan(kHeaderBytes);
  switch (static_cast<MessageType>(type)) {
    case MessageType::probe: {
      if (payload.size() < 4) throw FramingError("PROBE payload missing count");
      const std::uint32_t count = get_u32(payload);
      if (payload.size() - 4 != count) {
        throw FramingError(fmt::format("PROBE count {} does not match {} bytes", count, payload.size() - 4));
      }
      return Probe{{payload.begin() + 4, payload.end()}};
    }
    case MessageType::probe_ack:
      if (!payload.empty()) throw FramingError("PROBE_ACK must have an empty payload");
      return ProbeAck{};
    case MessageType::activation: {
      if (payload.size() < 5) throw FramingError("ACTIVATION payload too short");
      return Activation{payload[0], get_u32(payload.subspan(1)), {payload.begin() + 5, payload.end()}};
    }
    case MessageType::result:
      if (payload.size() != 8) throw FramingError("RESULT payload must be 8 bytes");
      return Result{get_u64(payload)};
  }
  throw FramingError(fmt::format("unknown message type 0x{:02x}", type));
}

void FrameDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (offset_ > 0 && offset_ == buffer_.size()) {
    buffer_.clear();
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<Message> FrameDecoder::next() {
  const std::span<const std::uint8_t> pending(buffer_.data() + offset_, buffer_.size() - offset_);
  if (pending.size() < 4) return std::nullopt;
  const std::uint32_t length = get_u32(pending);
  if (length == 0 || length > kMaxFrameBytes) throw FramingError(fmt::format("invalid frame length {}", length));
  if (pending.size() < 4 + std::size_t{length}) return std::nullopt;
  Message msg = decode(pending.first(4 + std::size_t{length}));
  offset_ += 4 + std::size_t{length};
  return msg;
}

}  // namespace edgesplit::wire
