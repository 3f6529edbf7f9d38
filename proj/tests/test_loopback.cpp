#include <doctest.h>

#include "edgesplit/errors.hpp"
#include "edgesplit/loopback.hpp"

using namespace edgesplit;

TEST_CASE("probe and activation exchanges") {
  LoopbackServer server;
  REQUIRE(server.port() != 0);
  LoopbackConnection conn(server.port());
  conn.send(wire::Probe{std::vector<std::uint8_t>(4096, 0x5A)});
  CHECK(std::holds_alternative<wire::ProbeAck>(conn.receive()));
  conn.send(wire::Activation{2, 17, std::vector<std::uint8_t>(100000, 1)});
  const auto r = conn.receive();
  REQUIRE(std::holds_alternative<wire::Result>(r));
  CHECK(server.frames_served() == 2);
}

TEST_CASE("unknown message type resets the connection") {
  LoopbackServer server;
  LoopbackConnection conn(server.port(), 2.0);
  const std::uint8_t junk[] = {0, 0, 0, 1, 0x42};
  conn.send_raw(junk);
  CHECK_THROWS_AS(conn.receive(), TransportError);
  // the server keeps serving other clients
  LoopbackConnection fresh(server.port());
  fresh.send(wire::Probe{{}});
  CHECK(std::holds_alternative<wire::ProbeAck>(fresh.receive()));
  CHECK(server.connections_reset() == 1);
}

TEST_CASE("loopback hop drives a link probe") {
  LoopbackServer server;
  LoopbackHop hop("loopback:test", server.port());
  CHECK(hop.identity() == "loopback:test");
  CHECK(hop.round_trip(1024) > 0.0);
  const auto l = probe_link(hop, ProbeConfig{1024, 1 << 20, 3}, kUnfittedLink);
  // localhost timing is noisy: either a fit or the stale model, never garbage
  CHECK(l.overhead_s >= 0.0);
  CHECK(l.throughput_bps > 0.0);
  server.stop();
  CHECK_THROWS_AS(LoopbackConnection(server.port(), 0.5), TransportError);
}
