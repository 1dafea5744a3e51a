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

#include "spacelink/quic/frame.hpp"
#include "support.hpp"

namespace spacelink::quic {
namespace {

using testing::Fixture;

std::vector<Frame> sample_frames() {
  AckFrame ack;
  ack.largest = 9;
  ack.ack_delay_us = 1000;
  ack.first_range = 2;
  ack.ranges = {{1, 3}};
  Bytes dg(40);
  for (std::size_t i = 0; i < dg.size(); ++i) dg[i] = static_cast<std::uint8_t>(0x33 + i);
  return {ack, StreamFrame{0, 4096, true, Bytes{'s', 'e', 't', ' ', '2', ' ', '7'}}, DatagramFrame{dg}, PingFrame{}};
}

TEST(QuicFrame, MatchesOracleEncoding) {
  const Fixture fx("quic_packet.hex");
  EXPECT_EQ(encode_frames(sample_frames()), fx.bytes("frames"));
  const std::vector<Frame> close{ConnectionCloseFrame{kHandshakeFailure, "bad signature"}};
  EXPECT_EQ(encode_frames(close), fx.bytes("close_frame"));
}

TEST(QuicFrame, DecodesOracleEncoding) {
  const Fixture fx("quic_packet.hex");
  EXPECT_EQ(decode_frames(fx.bytes("frames")), sample_frames());
  const auto tiny = decode_frames(fx.bytes("tiny"));
  ASSERT_EQ(tiny.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<PingFrame>(tiny[0]));
  EXPECT_EQ(std::get<PaddingFrame>(tiny[1]).length, 15u);
}

TEST(QuicFrame, EncodedSizeMatchesEncoding) {
  for (const auto& f : sample_frames()) {
    Bytes out;
    encode_frame(f, out);
    EXPECT_EQ(out.size(), encoded_size(f));
  }
}

TEST(QuicFrame, RandomRoundTrips) {
  Xoshiro256 rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Frame> frames;
    const auto n = 1 + rng.below(5);
    for (std::uint64_t i = 0; i < n; ++i) {
      switch (rng.below(5)) {
        case 0:
          frames.emplace_back(PingFrame{});
          break;
        case 1:
          frames.emplace_back(StreamFrame{static_cast<std::uint32_t>(rng.below(8)), rng.next() >> 8, rng.below(2) == 1,
                                          testing::random_bytes(rng, rng.below(200))});
          break;
        case 2:
          frames.emplace_back(DatagramFrame{testing::random_bytes(rng, rng.below(200))});
          break;
        case 3:
          frames.emplace_back(CryptoFrame{static_cast<std::uint32_t>(rng.below(1000)),
                                          testing::random_bytes(rng, rng.below(100))});
          break;
        default: {
          // Keep ranges non-negative: each step consumes gap+2+range.
          AckFrame ack;
          ack.largest = 10'000 + rng.below(100'000);
          ack.first_range = static_cast<std::uint16_t>(rng.below(50));
          const auto extra = rng.below(4);
          for (std::uint64_t r = 0; r < extra; ++r) {
            ack.ranges.emplace_back(static_cast<std::uint16_t>(rng.below(20)), static_cast<std::uint16_t>(rng.below(20)));
          }
          ack.ack_delay_us = static_cast<std::uint32_t>(rng.below(50'000));
          frames.emplace_back(ack);
        }
      }
    }
    ASSERT_EQ(decode_frames(encode_frames(frames)), frames);
  }
}

TEST(QuicFrame, UnknownTypeRejected) {
  const Bytes b{0x01, 0x3f};
  try {
    decode_frames(b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownFrameType);
  }
}

TEST(QuicFrame, TruncationRejected) {
  const auto full = encode_frames(sample_frames());
  // Every cut that lands inside a frame must fail cleanly.
  std::size_t malformed = 0;
  for (std::size_t cut = 1; cut < full.size(); ++cut) {
    try {
      decode_frames(ByteView(full).first(cut));
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::MalformedFrame) << cut;
      ++malformed;
    }
  }
  // Cuts at the three inner frame boundaries leave whole frames.
  EXPECT_EQ(malformed, full.size() - 4);
}

TEST(QuicFrame, ArbitraryBytesNeverCrash) {
  Xoshiro256 rng(5);
  for (int trial = 0; trial < 10'000; ++trial) {
    const auto blob = testing::random_bytes(rng, rng.below(64));
    try {
      decode_frames(blob);
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == Errc::UnknownFrameType || e.code() == Errc::MalformedFrame);
    }
  }
}

TEST(QuicFrame, AckElicitingClassification) {
  EXPECT_TRUE(is_ack_eliciting(PingFrame{}));
  EXPECT_TRUE(is_ack_eliciting(StreamFrame{}));
  EXPECT_TRUE(is_ack_eliciting(DatagramFrame{}));
  EXPECT_FALSE(is_ack_eliciting(AckFrame{}));
  EXPECT_FALSE(is_ack_eliciting(PaddingFrame{}));
  EXPECT_FALSE(is_ack_eliciting(ConnectionCloseFrame{}));
  EXPECT_TRUE(is_retransmittable(StreamFrame{}));
  EXPECT_FALSE(is_retransmittable(DatagramFrame{}));
}

}  // namespace
}  // namespace spacelink::quic
