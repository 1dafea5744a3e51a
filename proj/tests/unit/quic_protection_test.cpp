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

#include "spacelink/quic/key_schedule.hpp"
#include "spacelink/quic/packet_protection.hpp"
#include "support.hpp"

namespace spacelink::quic {
namespace {

using testing::Fixture;

class QuicProtection : public ::testing::TestWithParam<crypto::AeadAlgorithm> {
 protected:
  std::string prefix() const { return GetParam() == crypto::AeadAlgorithm::Aes256Gcm ? "gcm." : "chacha."; }

  static PacketKeys keys(const Fixture& fx, const std::string& base) {
    return PacketKeys{fx.array<32>(base + ".key"), fx.array<12>(base + ".iv"), fx.array<32>(base + ".hp")};
  }

  Fixture schedule{"key_schedule.hex"};
  Fixture packets{"quic_packet.hex"};
  ConnectionId cid = packets.array<8>("conn_id");
};

TEST_P(QuicProtection, ShortHeaderMatchesOracle) {
  const PacketProtector p(GetParam(), keys(schedule, "nopsk.client"));
  const auto sealed = p.seal_short(cid, 7, packets.bytes("frames"));
  EXPECT_EQ(sealed, packets.bytes(prefix() + "short_pn7"));
  const auto opened = p.open_short(sealed);
  ASSERT_TRUE(opened);
  EXPECT_EQ(opened->pn, 7u);
  EXPECT_EQ(opened->plaintext, packets.bytes("frames"));
}

TEST_P(QuicProtection, NonceUsesFullPacketNumber) {
  const PacketProtector p(GetParam(), keys(schedule, "nopsk.client"));
  const std::uint64_t pn = 0x1'0000'0123ULL;
  const auto sealed = p.seal_short(cid, pn, packets.bytes("tiny"));
  EXPECT_EQ(sealed, packets.bytes(prefix() + "short_pn_big"));
  // The header carries 32 bits, so such a packet cannot be opened; sessions
  // stop at kMaxPacketNumber for that reason.
  EXPECT_FALSE(p.open_short(sealed));
}

TEST_P(QuicProtection, LongHeaderMatchesOracle) {
  const PacketProtector p(GetParam(), keys(schedule, "initial.client"));
  const auto sealed = p.seal_long(LongType::Initial, cid, 0, packets.bytes("crypto_frame"));
  EXPECT_EQ(sealed, packets.bytes(prefix() + "initial_pn0"));
  const auto h = parse_header(sealed);
  EXPECT_TRUE(h.long_form);
  EXPECT_EQ(h.long_type, LongType::Initial);
  EXPECT_EQ(h.conn_id, cid);
  const auto opened = p.open_long(sealed);
  ASSERT_TRUE(opened);
  EXPECT_EQ(opened->plaintext, packets.bytes("crypto_frame"));
}

TEST_P(QuicProtection, InitialKeysFollowConnectionId) {
  const auto derived = derive_initial_keys(cid);
  EXPECT_EQ(derived.client, keys(schedule, "initial.client"));
  EXPECT_EQ(derived.server, keys(schedule, "initial.server"));
}

TEST_P(QuicProtection, EveryBitFlipRejected) {
  const PacketProtector p(GetParam(), keys(schedule, "nopsk.client"));
  const auto sealed = p.seal_short(cid, 7, packets.bytes("frames"));
  for (std::size_t bit = 0; bit < sealed.size() * 8; ++bit) {
    auto copy = sealed;
    copy[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(p.open_short(copy)) << bit;
  }
}

TEST_P(QuicProtection, WrongDirectionRejected) {
  const PacketProtector client(GetParam(), keys(schedule, "nopsk.client"));
  const PacketProtector server(GetParam(), keys(schedule, "nopsk.server"));
  EXPECT_FALSE(server.open_short(client.seal_short(cid, 1, packets.bytes("tiny"))));
}

TEST_P(QuicProtection, HeaderMaskIsHashPrefix) {
  const auto hp = schedule.array<32>("nopsk.client.hp");
  Bytes sample(kSampleSize, 0xab);
  Bytes input(hp.begin(), hp.end());
  input.insert(input.end(), sample.begin(), sample.end());
  const auto digest = crypto::sha256(input);
  const auto mask = header_protection_mask(hp, sample);
  EXPECT_TRUE(std::equal(mask.begin(), mask.end(), digest.begin()));
}

TEST_P(QuicProtection, ShortPlaintextRejected) {
  const PacketProtector p(GetParam(), keys(schedule, "nopsk.client"));
  EXPECT_THROW(p.seal_short(cid, 0, Bytes(kSampleSize - 1)), Error);
  EXPECT_THROW(p.seal_short(cid, 0, Bytes(kMaxShortPayload + 1)), Error);
  EXPECT_NO_THROW(p.seal_short(cid, 0, Bytes(kMaxShortPayload)));
}

TEST(QuicHeader, RejectsUnknownForms) {
  EXPECT_THROW(parse_header(Bytes{}), Error);
  EXPECT_THROW(parse_header(Bytes(20, 0x41)), Error);
  Bytes bad_version(30, 0);
  bad_version[0] = 0xc0;
  EXPECT_THROW(parse_header(bad_version), Error);
}

INSTANTIATE_TEST_SUITE_P(Backends, QuicProtection,
                         ::testing::Values(crypto::AeadAlgorithm::Aes256Gcm, crypto::AeadAlgorithm::ChaCha20Poly1305),
                         [](const auto& info) {
                           return info.param == crypto::AeadAlgorithm::Aes256Gcm ? std::string("Gcm")
                                                                                 : std::string("ChaCha");
                         });

}  // namespace
}  // namespace spacelink::quic
