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

#include "spacelink/packet/space_packet.hpp"
#include "support.hpp"

namespace spacelink::packet {
namespace {

Errc code_of(ByteView b) {
  try {
    decode(b);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode succeeded";
  return Errc::IoError;
}

TEST(SpacePacket, GoldenVectors) {
  const testing::Fixture fx("space_packet.hex");
  for (const std::string name : {"cmd_min", "tlm_max_fields", "cmd_zero", "tlm_256"}) {
    SpacePacket p{static_cast<PacketType>(fx.integer(name + ".type")), static_cast<std::uint16_t>(fx.integer(name + ".apid")),
                  static_cast<std::uint16_t>(fx.integer(name + ".seq")), fx.bytes(name + ".payload")};
    EXPECT_EQ(encode(p), fx.bytes(name + ".bytes")) << name;
    EXPECT_EQ(decode(fx.bytes(name + ".bytes")), p) << name;
  }
}

TEST(SpacePacket, SpecExampleBytes) {
  const SpacePacket p{PacketType::Command, 0x042, 1, {0xab}};
  EXPECT_EQ(to_hex(encode(p)), "1042c0010000ab");
}

TEST(SpacePacket, EncodeErrors) {
  try {
    encode(SpacePacket{PacketType::Command, 0x042, 1, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyPayload);
  }
  for (const auto& bad : {SpacePacket{PacketType::Command, 0x800, 0, {1}}, SpacePacket{PacketType::Command, 1, 0x4000, {1}}}) {
    try {
      encode(bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::FieldOverflow);
    }
  }
  EXPECT_THROW(encode(SpacePacket{PacketType::Telemetry, 1, 1, Bytes(kMaxPayloadSize + 1)}), Error);
  EXPECT_NO_THROW(encode(SpacePacket{PacketType::Telemetry, 1, 1, Bytes(kMaxPayloadSize)}));
}

TEST(SpacePacket, DecodeErrors) {
  EXPECT_EQ(code_of(from_hex("1042c0010000")), Errc::Truncated);
  EXPECT_EQ(code_of(from_hex("3042c0010000ab")), Errc::BadVersion);
  EXPECT_EQ(code_of(from_hex("1042c0010001ab")), Errc::Truncated);
  EXPECT_EQ(code_of(from_hex("1842c0010000ab")), Errc::UnsupportedHeader);
  EXPECT_EQ(code_of(from_hex("104240010000ab")), Errc::UnsupportedHeader);
  EXPECT_EQ(code_of(from_hex("1042c0010000abcd")), Errc::LengthMismatch);
}

TEST(SpacePacket, FuzzRoundTrip) {
  Xoshiro256 rng(11);
  for (int i = 0; i < 10000; ++i) {
    SpacePacket p;
    p.type = rng.below(2) ? PacketType::Command : PacketType::Telemetry;
    p.apid = static_cast<std::uint16_t>(rng.below(kMaxApid + 1));
    p.seq_count = static_cast<std::uint16_t>(rng.below(kMaxSeqCount + 1));
    p.payload = testing::random_bytes(rng, 1 + rng.below(i % 100 == 0 ? kMaxPayloadSize : 300));
    const auto wire = encode(p);
    ASSERT_EQ(wire.size(), kPrimaryHeaderSize + p.payload.size());
    ASSERT_EQ(decode(wire), p);
  }
}

TEST(SpacePacket, ArbitraryBytesNeverCrash) {
  Xoshiro256 rng(12);
  std::size_t ok = 0;
  for (int i = 0; i < 10000; ++i) {
    auto b = testing::random_bytes(rng, rng.below(40));
    if (b.size() >= 7 && rng.below(2)) {
      // Half the time: valid version, no secondary header, unsegmented, consistent length.
      b[0] &= 0x17;
      b[2] |= 0xc0;
      b[4] = static_cast<std::uint8_t>((b.size() - 7) >> 8);
      b[5] = static_cast<std::uint8_t>(b.size() - 7);
    }
    try {
      const auto p = decode(b);
      ASSERT_EQ(encode(p), b);
      ++ok;
    } catch (const Error&) {
    }
  }
  EXPECT_GT(ok, 0u);
}

TEST(PacketDeframer, SplitsConcatenatedPacketsAcrossArbitraryChunks) {
  Xoshiro256 rng(5);
  std::vector<SpacePacket> sent;
  Bytes stream;
  for (int i = 0; i < 50; ++i) {
    SpacePacket p{PacketType::Telemetry, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(i),
                  testing::random_bytes(rng, 1 + rng.below(200))};
    encode_into(p, stream);
    sent.push_back(std::move(p));
  }
  PacketDeframer d;
  std::vector<SpacePacket> got;
  for (std::size_t pos = 0; pos < stream.size();) {
    const auto n = std::min<std::size_t>(1 + rng.below(97), stream.size() - pos);
    d.push(ByteView(stream).subspan(pos, n));
    pos += n;
    while (auto p = d.next()) got.push_back(*p);
  }
  EXPECT_EQ(got, sent);
  EXPECT_EQ(d.buffered(), 0u);
}

TEST(PacketDeframer, MalformedHeaderThrowsAndClears) {
  PacketDeframer d;
  d.push(from_hex("ff42c0010000ab"));
  EXPECT_THROW(d.next(), Error);
  EXPECT_EQ(d.buffered(), 0u);
}

}  // namespace
}  // namespace spacelink::packet
