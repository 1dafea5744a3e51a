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

#include "spacelink/quic/packet_protection.hpp"

#include "spacelink/crypto/hash.hpp"

namespace spacelink::quic {

ByteArray<4> header_protection_mask(const ByteArray<32>& hp_key, ByteView sample) {
  ByteArray<32 + kSampleSize> input{};
  std::copy(hp_key.begin(), hp_key.end(), input.begin());
  std::copy_n(sample.begin(), std::min(sample.size(), kSampleSize), input.begin() + 32);
  const auto digest = crypto::sha256(input);
  return {digest[0], digest[1], digest[2], digest[3]};
}

crypto::AeadNonce packet_nonce(const ByteArray<12>& iv, std::uint64_t pn) noexcept {
  crypto::AeadNonce n{};
  std::copy(iv.begin(), iv.end(), n.begin());
  for (int i = 0; i < 8; ++i) n[4 + i] ^= static_cast<std::uint8_t>(pn >> (56 - 8 * i));
  return n;
}

ParsedHeader parse_header(ByteView datagram) {
  if (datagram.empty()) throw Error(Errc::Truncated, "empty datagram");
  ParsedHeader h;
  const auto first = datagram[0];
  if (first == kShortFormByte) {
    if (datagram.size() < kShortHeaderSize) throw Error(Errc::Truncated, "short header");
    h.long_form = false;
    std::copy_n(datagram.begin() + 1, kConnectionIdSize, h.conn_id.begin());
    h.header_size = kShortHeaderSize;
    return h;
  }
  if ((first & 0xfe) != kLongFormBits) throw Error(Errc::MalformedFrame, "unknown header form");
  if (datagram.size() < kLongHeaderSize) throw Error(Errc::Truncated, "long header");
  if (load_be32(datagram.data() + 1) != kVersion) throw Error(Errc::MalformedFrame, "unsupported version");
  h.long_form = true;
  h.long_type = static_cast<LongType>(first & 0x01);
  std::copy_n(datagram.begin() + 5, kConnectionIdSize, h.conn_id.begin());
  h.header_size = kLongHeaderSize;
  return h;
}

PacketProtector::PacketProtector(crypto::AeadAlgorithm alg, const PacketKeys& keys)
    : keys_(keys), aead_(alg, keys.key) {}

Bytes PacketProtector::seal_short(const ConnectionId& conn_id, std::uint64_t pn, ByteView plaintext) const {
  if (plaintext.size() < kSampleSize) throw Error(Errc::MalformedFrame, "plaintext shorter than sample");
  if (kShortHeaderSize + plaintext.size() + kTagSize > kMss) throw Error(Errc::Oversize);
  Bytes out;
  out.reserve(kShortHeaderSize + plaintext.size() + kTagSize);
  ByteWriter w(out);
  w.u8(kShortFormByte);
  w.bytes(conn_id);
  w.u32(static_cast<std::uint32_t>(pn));
  const ByteArray<kShortHeaderSize> aad = [&] {
    ByteArray<kShortHeaderSize> a{};
    std::copy(out.begin(), out.end(), a.begin());
    return a;
  }();
  aead_.seal(packet_nonce(keys_.iv, pn), aad, plaintext, out);
  const auto mask = header_protection_mask(keys_.hp, ByteView(out).subspan(kShortHeaderSize, kSampleSize));
  for (int i = 0; i < 4; ++i) out[9 + i] ^= mask[i];
  return out;
}

Bytes PacketProtector::seal_long(LongType type, const ConnectionId& conn_id, std::uint64_t pn,
                                 ByteView plaintext) const {
  if (kLongHeaderSize + plaintext.size() + kTagSize > kMss) throw Error(Errc::Oversize);
  Bytes out;
  out.reserve(kLongHeaderSize + plaintext.size() + kTagSize);
  ByteWriter w(out);
  w.u8(static_cast<std::uint8_t>(kLongFormBits | static_cast<std::uint8_t>(type)));
  w.u32(kVersion);
  w.bytes(conn_id);
  w.u32(static_cast<std::uint32_t>(pn));
  w.u16(static_cast<std::uint16_t>(plaintext.size() + kTagSize));
  const Bytes aad(out);
  aead_.seal(packet_nonce(keys_.iv, pn), aad, plaintext, out);
  return out;
}

std::optional<OpenedPacket> PacketProtector::open_short(ByteView datagram) const {
  if (datagram.size() < kShortHeaderSize + kSampleSize + kTagSize || datagram[0] != kShortFormByte) {
    return std::nullopt;
  }
  ByteArray<kShortHeaderSize> aad{};
  std::copy_n(datagram.begin(), kShortHeaderSize, aad.begin());
  const auto mask = header_protection_mask(keys_.hp, datagram.subspan(kShortHeaderSize, kSampleSize));
  for (int i = 0; i < 4; ++i) aad[9 + i] ^= mask[i];
  OpenedPacket opened;
  opened.pn = load_be32(aad.data() + 9);
  if (!aead_.open(packet_nonce(keys_.iv, opened.pn), aad, datagram.subspan(kShortHeaderSize), opened.plaintext)) {
    return std::nullopt;
  }
  return opened;
}

std::optional<OpenedPacket> PacketProtector::open_long(ByteView datagram) const {
  if (datagram.size() < kLongHeaderSize + kTagSize || (datagram[0] & 0xfe) != kLongFormBits) return std::nullopt;
  const auto declared = load_be16(datagram.data() + 17);
  if (declared != datagram.size() - kLongHeaderSize) return std::nullopt;
  OpenedPacket opened;
  opened.pn = load_be32(datagram.data() + 13);
  if (!aead_.open(packet_nonce(keys_.iv, opened.pn), datagram.first(kLongHeaderSize),
                  datagram.subspan(kLongHeaderSize), opened.plaintext)) {
    return std::nullopt;
  }
  return opened;
}

}  // namespace spacelink::quic
