#include "edgesplit/loopback.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include <fmt/format.h>

#include "edgesplit/errors.hpp"

namespace edgesplit {

namespace {

bool write_all(int fd, const std::uint8_t* data, std::size_t n) {
  while (n > 0) {
    const ssize_t rv = ::send(fd, data, n, MSG_NOSIGNAL);
    if (rv <= 0) {
      if (rv < 0 && errno == EINTR) continue;
      return false;
    }
    n -= static_cast<std::size_t>(rv);
    data += rv;
  }
  return true;
}

void reset_and_close(int fd) {
  linger lg{1, 0};
  ::setsockopt(fd, SOL_SOCKET, SO_LINGER, &lg, sizeof(lg));
  ::close(fd);
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

}  // namespace

LoopbackServer::LoopbackServer(std::uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw TransportError(fmt::format("socket: {}", std::strerror(errno)));
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(listen_fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    const std::string err = std::strerror(errno);
    ::close(listen_fd_);
    throw TransportError(fmt::format("bind/listen on 127.0.0.1:{}: {}", port, err));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  acceptor_ = std::thread([this] { accept_loop(); });
}

LoopbackServer::~LoopbackServer() { stop(); }

void LoopbackServer::stop() {
  if (stopping_.exchange(true)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mutex_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
}

void LoopbackServer::accept_loop() {
  while (!stopping_.load()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, 100) <= 0) continue;
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) continue;
    set_nodelay(fd);
    std::lock_guard lock(workers_mutex_);
    if (stopping_.load()) {
      ::close(fd);
      break;
    }
    client_fds_.push_back(fd);
    workers_.emplace_back([this, fd] { serve(fd); });
  }
}

void LoopbackServer::serve(int fd) {
  wire::FrameDecoder decoder;
  std::vector<std::uint8_t> buf(64 * 1024);
  auto frame_start = std::chrono::steady_clock::now();
  bool mid_frame = false;
  bool reset = false;
  while (!stopping_.load()) {
    const ssize_t rv = ::recv(fd, buf.data(), buf.size(), 0);
    if (rv <= 0) break;
    if (!mid_frame) {
      frame_start = std::chrono::steady_clock::now();
      mid_frame = true;
    }
    decoder.feed({buf.data(), static_cast<std::size_t>(rv)});
    try {
      while (auto msg = decoder.next()) {
        std::vector<std::uint8_t> reply;
        if (std::holds_alternative<wire::Probe>(*msg)) {
          reply = wire::encode(wire::ProbeAck{});
        } else if (std::holds_alternative<wire::Activation>(*msg)) {
          const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                               frame_start);
          reply = wire::encode(wire::Result{static_cast<std::uint64_t>(ns.count())});
        } else {
          throw FramingError("unexpected message direction");
        }
        ++frames_served_;
        if (!write_all(fd, reply.data(), reply.size())) break;
        frame_start = std::chrono::steady_clock::now();
      }
      mid_frame = decoder.buffered() > 0;
    } catch (const FramingError&) {
      reset = true;
      break;
    }
  }
  {
    std::lock_guard lock(workers_mutex_);
    std::erase(client_fds_, fd);
  }
  if (reset) {
    ++connections_reset_;
    reset_and_close(fd);
  } else {
    ::close(fd);
  }
}

LoopbackConnection::LoopbackConnection(std::uint16_t port, double timeout_s) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError(fmt::format("socket: {}", std::strerror(errno)));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::connect(fd_, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd_);
    throw TransportError(fmt::format("connect to 127.0.0.1:{}: {}", port, err));
  }
  set_nodelay(fd_);
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout_s);
  tv.tv_usec = static_cast<suseconds_t>((timeout_s - static_cast<double>(tv.tv_sec)) * 1e6);
  ::setsockopt(fd_, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

LoopbackConnection::~LoopbackConnection() {
  if (fd_ >= 0) ::close(fd_);
}

void LoopbackConnection::send(const wire::Message& msg) {
  const auto frame = wire::encode(msg);
  send_raw(frame);
}

void LoopbackConnection::send_raw(std::span<const std::uint8_t> bytes) {
  if (!write_all(fd_, bytes.data(), bytes.size())) throw TransportError(fmt::format("send: {}", std::strerror(errno)));
}

wire::Message LoopbackConnection::receive() {
  std::vector<std::uint8_t> buf(4096);
  while (true) {
    if (auto msg = decoder_.next()) return *msg;
    const ssize_t rv = ::recv(fd_, buf.data(), buf.size(), 0);
    if (rv == 0) throw TransportError("connection closed by peer");
    if (rv < 0) {
      if (errno == EINTR) continue;
      throw TransportError(fmt::format("recv: {}", std::strerror(errno)));
    }
    decoder_.feed({buf.data(), static_cast<std::size_t>(rv)});
  }
}

LoopbackHop::LoopbackHop(std::string name, std::uint16_t port) : name_(std::move(name)), port_(port) {}

double LoopbackHop::round_trip(std::uint64_t payload_bytes) {
  if (payload_bytes > wire::kMaxFrameBytes - 16) throw TransportError("probe payload too large");
  try {
    if (!conn_) conn_ = std::make_unique<LoopbackConnection>(port_);
    wire::Probe probe{std::vector<std::uint8_t>(static_cast<std::size_t>(payload_bytes), 0xA5)};
    const auto start = std::chrono::steady_clock::now();
    conn_->send(probe);
    const wire::Message reply = conn_->receive();
    const auto stop = std::chrono::steady_clock::now();
    if (!std::holds_alternative<wire::ProbeAck>(reply)) throw TransportError("expected PROBE_ACK");
    return std::chrono::duration<double>(stop - start).count();
  } catch (const TransportError&) {
    conn_.reset();
    throw;
  } catch (const FramingError& e) {
    conn_.reset();
    throw TransportError(e.what());
  }
}

}  // namespace edgesplit
