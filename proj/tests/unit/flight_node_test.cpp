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

#include "spacelink/endpoints/testbed.hpp"
#include "support.hpp"

namespace spacelink::endpoints {
namespace {

Bytes command_bytes(const Command& c, std::uint16_t seq = 1, std::uint16_t apid = 0x042) {
  return packet::encode(packet::SpacePacket{packet::PacketType::Command, apid, seq, encode_command_payload(c)});
}

FlightNode plain_node(FlightConfig cfg = {}) {
  cfg.hk_period = Micros{0};
  return FlightNode(cfg, std::make_unique<PlainLink>());
}

std::vector<packet::SpacePacket> downlink(FlightNode& node, Micros now) {
  node.step(now);
  std::vector<packet::SpacePacket> out;
  while (auto d = node.poll_downlink(now)) out.push_back(packet::decode(*d));
  return out;
}

TEST(FlightNode, NoopCountsAndAcknowledges) {
  auto node = plain_node();
  node.ci_ingest(command_bytes(Command{FunctionCode::Noop}, 4), 0_ms);
  const auto out = downlink(node, 0_ms);
  EXPECT_EQ(node.hk_state().cmd_accept_count, 1u);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].apid, 0x043);
  const auto ev = EventTelemetry::decode(out[0].payload);
  ASSERT_TRUE(ev);
  EXPECT_EQ(ev->id, EventId::CommandAccepted);
  EXPECT_EQ(ev->cmd_seq, 4);
}

TEST(FlightNode, BadChecksumRejectedWithoutPublish) {
  auto node = plain_node();
  auto bytes = command_bytes(Command{FunctionCode::Noop});
  bytes.back() ^= 0x40;
  const auto before = node.bus().publish_count();
  node.ci_ingest(bytes, 0_ms);
  EXPECT_EQ(node.hk_state().cmd_reject_count, 1u);
  EXPECT_EQ(node.hk_state().cmd_accept_count, 0u);
  // Only the rejection event was published.
  EXPECT_EQ(node.bus().publish_count(), before + 1);
  const auto out = downlink(node, 0_ms);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(EventTelemetry::decode(out[0].payload)->reason, RejectReason::BadChecksum);
}

TEST(FlightNode, SetParamReflectedInHk) {
  auto node = plain_node();
  node.ci_ingest(command_bytes(Command{FunctionCode::SetParam, 2, 7}, 1), 0_ms);
  node.ci_ingest(command_bytes(Command{FunctionCode::RequestHk}, 2), 0_ms);
  std::optional<HkTelemetry> hk;
  for (const auto& p : downlink(node, 1_ms)) {
    if (p.apid == 0x042) hk = HkTelemetry::decode(p.payload);
  }
  ASSERT_TRUE(hk);
  EXPECT_EQ(hk->params[2], 7u);
  EXPECT_EQ(hk->cmd_accept_count, 2u);
  EXPECT_EQ(hk->uptime_us, 1000u);
}

TEST(FlightNode, RejectReasons) {
  auto node = plain_node();
  node.ci_ingest(command_bytes(Command{FunctionCode::SetParam, 9, 1}), 0_ms);
  node.ci_ingest(command_bytes(Command{FunctionCode::Noop}, 2, 0x099), 0_ms);
  node.ci_ingest(packet::encode(packet::SpacePacket{packet::PacketType::Telemetry, 0x042, 3, Bytes{0, 0}}), 0_ms);
  node.ci_ingest(Bytes{0x00, 0x01}, 0_ms);
  node.step(0_ms);
  std::vector<RejectReason> reasons;
  for (const auto& r : node.command_log()) reasons.push_back(r.reason);
  // Parameter range is checked when the housekeeping app executes, after CI.
  EXPECT_EQ(reasons, (std::vector{RejectReason::UnknownApid, RejectReason::MalformedPacket,
                                  RejectReason::MalformedPacket, RejectReason::BadParam}));
  EXPECT_EQ(node.hk_state().cmd_reject_count, 4u);
}

TEST(FlightNode, ResetCountsItself) {
  auto node = plain_node();
  for (int i = 0; i < 3; ++i) node.ci_ingest(command_bytes(Command{FunctionCode::Noop}), 0_ms);
  node.ci_ingest(Bytes{1}, 0_ms);
  node.ci_ingest(command_bytes(Command{FunctionCode::ResetCounters}), 0_ms);
  node.step(0_ms);
  EXPECT_EQ(node.hk_state().cmd_accept_count, 1u);
  EXPECT_EQ(node.hk_state().cmd_reject_count, 0u);
}

TEST(FlightNode, PeriodicHousekeeping) {
  FlightConfig cfg;
  FlightNode node(cfg, std::make_unique<PlainLink>());
  EXPECT_EQ(node.next_wakeup(), 1_s);
  std::size_t hk = 0;
  for (Micros t{0}; t <= 10_s; t += 100_ms) hk += downlink(node, t).size();
  EXPECT_EQ(hk, 10u);
  EXPECT_EQ(node.hk_published(), 10u);
}

TEST(FlightNode, TelemetryPipeOverflow) {
  FlightConfig cfg;
  cfg.hk_period = Micros{0};
  cfg.to_pipe_depth = 4;
  FlightNode node(cfg, std::make_unique<PlainLink>());
  for (int i = 0; i < 6; ++i) node.publish_hk(0_ms);
  EXPECT_EQ(node.bus().stats(node.to_pipe()).overflow_count, 2u);
  node.to_downlink(0_ms);
  std::size_t sent = 0;
  while (node.poll_downlink(0_ms)) ++sent;
  EXPECT_EQ(sent, 4u);
}

TEST(FlightNode, ArbitraryUplinkNeverCrashes) {
  for (const auto m : {Mode::None, Mode::Sdls, Mode::Quic}) {
    const auto keys = KeyMaterial::from_seed(3, crypto::AeadAlgorithm::Aes256Gcm);
    SeededRandom frng(1), grng(2);
    FlightConfig cfg;
    cfg.hk_period = Micros{0};
    cfg.to_pipe_depth = 2048;
    FlightNode node(cfg, make_flight_link({m}, keys, {}, frng));
    if (m == Mode::Quic) {
      // Establish a session first so blobs hit the packet path, not just the hello check.
      auto ground = make_ground_link({m}, keys, {}, grng);
      static_cast<QuicClientLink&>(*ground).connect(0_ms);
      node.ci_ingest(*ground->poll_transmit(0_ms), 0_ms);
    }
    Xoshiro256 rng(42);
    for (int i = 0; i < 1000; ++i) {
      auto blob = testing::random_bytes(rng, rng.below(300));
      if (!blob.empty() && rng.below(4) == 0) blob[0] = 0x40;  // quic short form
      if (blob.size() > 8 && rng.below(4) == 0) blob[0] = 0x10;  // space packet command, v0
      node.ci_ingest(blob, 0_ms);
      node.step(0_ms);
    }
    const auto& hk = node.hk_state();
    EXPECT_EQ(hk.cmd_accept_count + hk.cmd_reject_count, 1000u) << to_string(m);
  }
}

}  // namespace
}  // namespace spacelink::endpoints
