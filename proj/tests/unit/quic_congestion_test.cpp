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

#include "spacelink/quic/congestion.hpp"

namespace spacelink::quic {
namespace {

NewReno grown_to(std::size_t packets) {
  NewReno cc;
  for (std::size_t i = 10; i < packets; ++i) cc.on_event(NewReno::Acked{kMss, i});
  return cc;
}

TEST(NewReno, StartsAtTenSegments) {
  NewReno cc;
  EXPECT_EQ(cc.cwnd(), 10 * kMss);
  EXPECT_EQ(cc.min_window(), 2 * kMss);
}

TEST(NewReno, LossHalvesWindow) {
  auto cc = grown_to(20);
  ASSERT_EQ(cc.cwnd(), 20 * kMss);
  EXPECT_EQ(cc.on_event(NewReno::LossEvent{5, 30}), 10 * kMss);
  EXPECT_EQ(cc.ssthresh(), 10 * kMss);
}

TEST(NewReno, OneReductionPerRecoveryEpoch) {
  auto cc = grown_to(20);
  cc.on_event(NewReno::LossEvent{5, 30});
  EXPECT_EQ(cc.on_event(NewReno::LossEvent{12, 31}), 10 * kMss);
  EXPECT_EQ(cc.on_event(NewReno::LossEvent{30, 31}), 10 * kMss);
  EXPECT_EQ(cc.congestion_events(), 1u);
  // Acks for packets sent before the epoch began do not grow the window.
  EXPECT_EQ(cc.on_event(NewReno::Acked{kMss, 29}), 10 * kMss);
  // A loss after the epoch starts a new one.
  EXPECT_EQ(cc.on_event(NewReno::LossEvent{31, 40}), 5 * kMss);
}

TEST(NewReno, FloorAtTwoSegments) {
  NewReno cc;
  for (std::uint64_t epoch = 0; epoch < 10; ++epoch) cc.on_event(NewReno::LossEvent{epoch * 10 + 1, epoch * 10 + 5});
  EXPECT_EQ(cc.cwnd(), 2 * kMss);
}

TEST(NewReno, PtoDoesNotCollapseWindow) {
  auto cc = grown_to(20);
  EXPECT_EQ(cc.on_event(NewReno::PtoFired{}), 20 * kMss);
  EXPECT_EQ(cc.pto_events(), 1u);
  EXPECT_EQ(cc.congestion_events(), 0u);
}

TEST(NewReno, CongestionAvoidanceAddsOneSegmentPerWindow) {
  auto cc = grown_to(20);
  cc.on_event(NewReno::LossEvent{5, 30});
  const auto start = cc.cwnd();
  std::uint64_t pn = 31;
  for (std::size_t i = 0; i < start / kMss; ++i) cc.on_event(NewReno::Acked{kMss, pn++});
  // Integer division loses a little as the window grows within the round.
  EXPECT_LE(cc.cwnd(), start + kMss);
  EXPECT_GE(cc.cwnd(), start + kMss - 60);
}

TEST(NewReno, BytesInFlightAccounting) {
  NewReno cc;
  cc.on_packet_sent(1000);
  cc.on_packet_sent(500);
  EXPECT_EQ(cc.bytes_in_flight(), 1500u);
  EXPECT_TRUE(cc.can_send(10 * kMss - 1500));
  EXPECT_FALSE(cc.can_send(10 * kMss - 1499));
  cc.on_packet_removed(2000);
  EXPECT_EQ(cc.bytes_in_flight(), 0u);
}

}  // namespace
}  // namespace spacelink::quic
