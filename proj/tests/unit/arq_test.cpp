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

#include "spacelink/channel/channel.hpp"
#include "spacelink/endpoints/arq.hpp"
#include "support.hpp"

namespace spacelink::endpoints {
namespace {

using channel::Direction;

struct ArqRun {
  bool done = false;
  bool failed = false;
  Bytes received;
  ArqStats stats;
  Micros elapsed{0};
};

ArqRun transfer(ByteView data, double loss, std::uint64_t seed, std::size_t chunk = 100) {
  channel::ChannelConfig cfg;
  cfg.one_way_delay = 10_ms;
  cfg.loss_rate = loss;
  cfg.seed = seed;
  channel::Channel ch(cfg);
  StopAndWaitSender tx(20_ms, chunk);
  StopAndWaitReceiver rx;
  tx.submit(data);
  Micros now{0};
  while (!tx.done() && !tx.failed() && now < 600_s) {
    while (auto f = tx.poll(now)) ch.send(*f, Direction::Up, now);
    now = std::min(ch.next_delivery(), tx.next_timeout());
    if (now == kNever) break;
    for (const auto& e : ch.advance(now)) {
      if (e.direction == Direction::Up) {
        if (auto ack = rx.on_frame(e.datagram)) ch.send(*ack, Direction::Down, now);
      } else {
        tx.on_ack(e.datagram, now);
      }
    }
    tx.on_timeout(now);
  }
  return {tx.done(), tx.failed(), rx.received(), tx.stats(), now};
}

TEST(StopAndWait, LosslessTransferTakesOneRttPerChunk) {
  const Bytes data(1000, 0x5a);
  const auto r = transfer(data, 0.0, 1);
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.received, data);
  EXPECT_EQ(r.stats.retransmissions, 0u);
  EXPECT_EQ(r.stats.frames_sent, 10u);
  EXPECT_EQ(r.elapsed, 10 * 20_ms);
}

TEST(StopAndWait, RecoversFromLoss) {
  Xoshiro256 rng(2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto data = testing::random_bytes(rng, 5000);
    const auto r = transfer(data, 0.2, seed);
    ASSERT_TRUE(r.done) << seed;
    EXPECT_EQ(r.received, data);
    EXPECT_GT(r.stats.retransmissions, 0u);
  }
}

TEST(StopAndWait, GivesUpAfterMaxTries) {
  const auto r = transfer(Bytes(10, 1), 1.0, 3);
  EXPECT_TRUE(r.failed);
  EXPECT_EQ(r.stats.frames_sent, 10u);
  EXPECT_EQ(r.stats.retransmissions, 9u);
}

TEST(StopAndWait, RetransmitsAfterTwiceRtt) {
  StopAndWaitSender tx(100_ms, 10);
  tx.submit(Bytes(5, 1));
  ASSERT_TRUE(tx.poll(0_ms));
  EXPECT_EQ(tx.next_timeout(), 200_ms);
  tx.on_timeout(199_ms);
  EXPECT_FALSE(tx.poll(199_ms));
  tx.on_timeout(200_ms);
  EXPECT_TRUE(tx.poll(200_ms));
  EXPECT_EQ(tx.stats().retransmissions, 1u);
}

TEST(StopAndWait, StaleAndMalformedAcksIgnored) {
  StopAndWaitSender tx(10_ms, 4);
  tx.submit(Bytes(8, 1));
  tx.poll(0_ms);
  tx.on_ack(Bytes{0, 0, 0, 5}, 1_ms);
  tx.on_ack(Bytes{0, 0}, 1_ms);
  EXPECT_EQ(tx.stats().stale_acks, 1u);
  EXPECT_FALSE(tx.done());
  EXPECT_THROW(StopAndWaitSender(10_ms, 0), Error);
}

TEST(StopAndWait, ReceiverDropsDuplicates) {
  StopAndWaitReceiver rx;
  EXPECT_TRUE(rx.on_frame(Bytes{0, 0, 0, 0, 'a'}));
  EXPECT_TRUE(rx.on_frame(Bytes{0, 0, 0, 0, 'a'}));
  EXPECT_TRUE(rx.on_frame(Bytes{0, 0, 0, 1, 'b'}));
  EXPECT_FALSE(rx.on_frame(Bytes{0, 0}));
  EXPECT_EQ(rx.received(), (Bytes{'a', 'b'}));
  EXPECT_EQ(rx.duplicates(), 1u);
}

}  // namespace
}  // namespace spacelink::endpoints
