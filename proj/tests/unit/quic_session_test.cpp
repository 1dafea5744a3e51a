// Copyright 2026 The spacelink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "spacelink/quic/session.hpp"
#include "support.hpp"

namespace spacelink::quic {
namespace {

using testing::SessionPair;

template <typename T>
std::vector<T> drain(Session& s) {
  std::vector<T> out;
  while (auto e = s.poll_event()) {
    if (auto* v = std::get_if<T>(&*e)) out.push_back(std::move(*v));
  }
  return out;
}

Bytes collect_stream(Session& s) {
  Bytes out;
  for (auto& e : drain<StreamDataEvent>(s)) out.insert(out.end(), e.data.begin(), e.data.end());
  return out;
}

TEST(Session, HandshakeEstablishesMatchingKeys) {
  SessionPair p(1);
  p.handshake();
  EXPECT_EQ(p.client.state(), State::Established);
  EXPECT_EQ(p.server.state(), State::Established);
  EXPECT_EQ(p.client.conn_id(), p.server.conn_id());
  ASSERT_TRUE(p.client.application_keys());
  EXPECT_EQ(*p.client.application_keys(), *p.server.application_keys());
  EXPECT_FALSE(p.client.early_data_accepted());
  EXPECT_TRUE(p.client.issued_ticket());
  EXPECT_EQ(p.tickets.size(), 1u);
}

TEST(Session, StreamAndDatagramExchange) {
  SessionPair p(2);
  p.handshake();
  Xoshiro256 rng(2);
  const auto big = testing::random_bytes(rng, 20'000);
  p.client.send_stream(0, big, true);
  p.client.send_datagram(Bytes{1, 2, 3});
  p.pump(1_ms);
  std::vector<StreamDataEvent> streams;
  std::vector<DatagramEvent> dgrams;
  while (auto e = p.server.poll_event()) {
    if (auto* s = std::get_if<StreamDataEvent>(&*e)) streams.push_back(*s);
    if (auto* d = std::get_if<DatagramEvent>(&*e)) dgrams.push_back(*d);
  }
  Bytes got;
  for (const auto& s : streams) got.insert(got.end(), s.data.begin(), s.data.end());
  EXPECT_EQ(got, big);
  EXPECT_TRUE(streams.back().fin);
  ASSERT_EQ(dgrams.size(), 1u);
  EXPECT_EQ(dgrams[0].data, (Bytes{1, 2, 3}));
}

TEST(Session, WrongPinnedKeyNeverEstablishes) {
  SessionPair p(3, {}, crypto::Ed25519Identity::from_seed(SessionPair::seed_for(99)).public_key());
  p.handshake();
  EXPECT_EQ(p.client.state(), State::Closed);
  EXPECT_FALSE(p.client.established_at());
  const auto closed = drain<ClosedEvent>(p.client);
  ASSERT_EQ(closed.size(), 1u);
  EXPECT_EQ(closed[0].code, kHandshakeFailure);
  EXPECT_TRUE(drain<EstablishedEvent>(p.client).empty());
  EXPECT_THROW(p.client.send_stream(0, Bytes{1}), Error);
}

TEST(Session, CorruptedPacketsNeverDelivered) {
  for (const auto alg : {crypto::AeadAlgorithm::Aes256Gcm, crypto::AeadAlgorithm::ChaCha20Poly1305}) {
    SessionConfig cfg;
    cfg.algorithm = alg;
    SessionPair p(4, cfg);
    p.handshake();
    drain<EstablishedEvent>(p.server);
    Xoshiro256 rng(4);
    std::size_t accepted = 0;
    for (int trial = 0; trial < 1000; ++trial) {
      const std::vector<Frame> frames{DatagramFrame{Bytes(1 + rng.below(300), static_cast<std::uint8_t>(trial))}};
      auto bad = p.client.protect(frames, Micros(trial));
      const auto flips = 1 + rng.below(4);
      for (std::uint64_t i = 0; i < flips; ++i) bad[rng.below(bad.size())] ^= static_cast<std::uint8_t>(1 + rng.below(255));
      p.server.on_datagram(bad, Micros(trial));
      while (auto e = p.server.poll_event()) accepted += std::holds_alternative<DatagramEvent>(*e) ? 1 : 0;
    }
    EXPECT_EQ(accepted, 0u);
    EXPECT_EQ(p.server.state(), State::Established);
    const auto& st = p.server.stats();
    EXPECT_EQ(st.auth_failures + st.unknown_conn_id + st.malformed, 1000u);
  }
}

TEST(Session, ReplayedPacketCountedAsDuplicate) {
  SessionPair p(5);
  p.handshake();
  drain<EstablishedEvent>(p.server);
  p.client.send_datagram(Bytes{42});
  const auto d = *p.client.poll_transmit(1_ms);
  p.server.on_datagram(d, 1_ms);
  p.server.on_datagram(d, 2_ms);
  EXPECT_EQ(drain<DatagramEvent>(p.server).size(), 1u);
  EXPECT_EQ(p.server.stats().duplicates, 1u);
}

TEST(Session, OversizePayloadRejected) {
  SessionPair p(6);
  p.handshake();
  const std::vector<Frame> fits{DatagramFrame{Bytes(kMaxShortPayload - kDatagramFrameOverhead)}};
  EXPECT_EQ(p.client.protect(fits, 0_ms).size(), kMss);
  const std::vector<Frame> over{DatagramFrame{Bytes(kMaxShortPayload - kDatagramFrameOverhead + 1)}};
  try {
    p.client.protect(over, 0_ms);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Oversize);
  }
  EXPECT_THROW(p.client.send_datagram(Bytes(kMaxDatagramData + 1)), Error);
}

TEST(Session, ProtectBeforeKeysRejected) {
  SessionPair p(7);
  const std::vector<Frame> ping{PingFrame{}};
  try {
    p.client.protect(ping, 0_ms);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotEstablished);
  }
  EXPECT_THROW(p.server.client_hello(0_ms), Error);
}

TEST(Session, UnknownConnectionIdCounted) {
  SessionPair p(8);
  p.handshake();
  SessionPair other(9);
  other.handshake();
  other.client.send_datagram(Bytes{1});
  p.server.on_datagram(*other.client.poll_transmit(0_ms), 0_ms);
  EXPECT_EQ(p.server.stats().unknown_conn_id, 1u);
}

TEST(Session, ResumptionSendsEarlyData) {
  SessionPair first(10);
  first.handshake();
  const auto ticket = first.client.issued_ticket();
  ASSERT_TRUE(ticket);

  SeededRandom crng(100), srng(101);
  auto client = Session::client({}, first.identity.public_key(), crng, ticket);
  auto server = Session::server({}, first.identity, first.tickets, srng);
  const auto ch = client.client_hello(0_ms);
  EXPECT_TRUE(client.early_data_enabled());
  client.send_stream(0, Bytes{'h', 'k'}, true);
  const auto early = client.poll_transmit(0_ms);
  ASSERT_TRUE(early);
  EXPECT_EQ(parse_header(*early).long_type, LongType::ZeroRtt);

  // The early packet alone reaches the server after the hello: data arrives in one trip.
  server.on_datagram(ch, 10_ms);
  server.on_datagram(*early, 10_ms);
  EXPECT_TRUE(server.early_data_accepted());
  EXPECT_EQ(collect_stream(server), (Bytes{'h', 'k'}));

  while (auto d = server.poll_transmit(10_ms)) client.on_datagram(*d, 20_ms);
  EXPECT_EQ(client.state(), State::Established);
  EXPECT_TRUE(client.early_data_accepted());
  EXPECT_EQ(client.stats().early_data_replayed, 0u);
}

TEST(Session, ResumptionTicketIsSingleUse) {
  SessionPair first(11);
  first.handshake();
  const auto ticket = first.client.issued_ticket();

  SeededRandom crng(200), srng(201), srng2(202);
  auto client = Session::client({}, first.identity.public_key(), crng, ticket);
  auto server = Session::server({}, first.identity, first.tickets, srng);
  auto replay_server = Session::server({}, first.identity, first.tickets, srng2);
  const auto ch = client.client_hello(0_ms);
  client.send_stream(0, Bytes{'x'}, true);
  const auto early = *client.poll_transmit(0_ms);

  server.on_datagram(ch, 1_ms);
  server.on_datagram(early, 1_ms);
  EXPECT_EQ(collect_stream(server), Bytes{'x'});

  // An attacker replaying the same flight against the same ticket table gets nothing.
  replay_server.on_datagram(ch, 2_ms);
  replay_server.on_datagram(early, 2_ms);
  EXPECT_FALSE(replay_server.early_data_accepted());
  EXPECT_EQ(replay_server.stats().tickets_rejected, 1u);
  EXPECT_TRUE(collect_stream(replay_server).empty());
}

TEST(Session, RefusedEarlyDataIsResent) {
  SessionPair first(12);
  first.handshake();
  auto ticket = *first.client.issued_ticket();
  ticket.identity[0] ^= 1;  // unknown to the server

  SeededRandom crng(300), srng(301);
  auto client = Session::client({}, first.identity.public_key(), crng, ticket);
  auto server = Session::server({}, first.identity, first.tickets, srng);
  const auto ch = client.client_hello(0_ms);
  client.send_stream(0, Bytes{'r', 'e'}, true);
  const auto early = *client.poll_transmit(0_ms);
  server.on_datagram(ch, 1_ms);
  server.on_datagram(early, 1_ms);
  EXPECT_TRUE(collect_stream(server).empty());

  while (auto d = server.poll_transmit(1_ms)) client.on_datagram(*d, 2_ms);
  EXPECT_EQ(client.state(), State::Established);
  EXPECT_FALSE(client.early_data_accepted());
  EXPECT_EQ(client.stats().early_data_replayed, 1u);
  while (auto d = client.poll_transmit(2_ms)) server.on_datagram(*d, 3_ms);
  EXPECT_EQ(collect_stream(server), (Bytes{'r', 'e'}));
}

TEST(Session, LossRecoveredByRetransmission) {
  SessionPair p(13);
  p.handshake();
  Xoshiro256 rng(13);
  const auto payload = testing::random_bytes(rng, 30'000);
  p.client.send_stream(0, payload, true);
  Micros now{0};
  Bytes got;
  for (int round = 0; round < 400 && got.size() < payload.size(); ++round) {
    while (auto d = p.client.poll_transmit(now)) {
      if (rng.below(100) >= 20) p.server.on_datagram(*d, now + 10_ms);
    }
    now += 10_ms;
    while (auto d = p.server.poll_transmit(now)) {
      if (rng.below(100) >= 20) p.client.on_datagram(*d, now + 10_ms);
    }
    const auto more = collect_stream(p.server);
    got.insert(got.end(), more.begin(), more.end());
    now += 10_ms;
    p.client.on_timeout(now);
    p.server.on_timeout(now);
  }
  EXPECT_EQ(got, payload);
  EXPECT_GT(p.client.stats().packets_lost + p.client.stats().pto_count, 0u);
}

TEST(Session, CloseReachesPeer) {
  SessionPair p(14);
  p.handshake();
  p.client.close(kNoError, "bye");
  p.pump(1_ms);
  EXPECT_EQ(p.server.state(), State::Closed);
  const auto closed = drain<ClosedEvent>(p.server);
  ASSERT_EQ(closed.size(), 1u);
  EXPECT_TRUE(closed[0].by_peer);
  EXPECT_EQ(closed[0].reason, "bye");
}

}  // namespace
}  // namespace spacelink::quic
