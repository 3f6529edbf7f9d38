#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "edgesplit/link.hpp"
#include "edgesplit/wire.hpp"

namespace edgesplit {

/// TCP echo peer on 127.0.0.1 speaking the wire protocol: answers PROBE with
/// PROBE_ACK and ACTIVATION with RESULT (nanoseconds spent receiving the
/// frame). Any undecodable frame resets that connection.
class LoopbackServer {
 public:
  /// Binds an ephemeral port (or `port` when nonzero) and starts accepting.
  explicit LoopbackServer(std::uint16_t port = 0);
  ~LoopbackServer();
  LoopbackServer(const LoopbackServer&) = delete;
  LoopbackServer& operator=(const LoopbackServer&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  std::uint64_t frames_served() const noexcept { return frames_served_.load(); }
  std::uint64_t connections_reset() const noexcept { return connections_reset_.load(); }

  void stop();

 private:
  void accept_loop();
  void serve(int fd);

  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::atomic<std::uint64_t> frames_served_{0};
  std::atomic<std::uint64_t> connections_reset_{0};
  std::thread acceptor_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
  std::vector<int> client_fds_;
};

/// Blocking client connection to a LoopbackServer.
class LoopbackConnection {
 public:
  LoopbackConnection(std::uint16_t port, double timeout_s = 5.0);
  ~LoopbackConnection();
  LoopbackConnection(const LoopbackConnection&) = delete;
  LoopbackConnection& operator=(const LoopbackConnection&) = delete;

  void send(const wire::Message& msg);
  void send_raw(std::span<const std::uint8_t> bytes);
  /// Throws TransportError on EOF, reset or timeout.
  wire::Message receive();

 private:
  int fd_ = -1;
  wire::FrameDecoder decoder_;
};

/// Hop whose round trip is wall-clock timed over a loopback connection.
class LoopbackHop final : public RttTransport {
 public:
  LoopbackHop(std::string name, std::uint16_t port);

  std::string identity() const override { return name_; }
  double round_trip(std::uint64_t payload_bytes) override;

 private:
  std::string name_;
  std::uint16_t port_;
  std::unique_ptr<LoopbackConnection> conn_;
};

}  // namespace edgesplit
