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

#pragma once

#include <optional>

#include "spacelink/crypto/aead.hpp"
#include "spacelink/quic/types.hpp"

namespace spacelink::quic {

/// mask = first 4 bytes of SHA-256(hp_key || sample).
ByteArray<4> header_protection_mask(const ByteArray<32>& hp_key, ByteView sample);

/// nonce = iv XOR (pn as 12-byte big-endian).
crypto::AeadNonce packet_nonce(const ByteArray<12>& iv, std::uint64_t pn) noexcept;

struct ParsedHeader {
  bool long_form = false;
  LongType long_type = LongType::Initial;
  ConnectionId conn_id{};
  std::size_t header_size = 0;
};

/// Reads the invariant part of a header (form, type, version, conn id).
/// Throws Truncated or MalformedFrame (bad first byte or version).
ParsedHeader parse_header(ByteView datagram);

struct OpenedPacket {
  std::uint64_t pn = 0;
  Bytes plaintext;
};

/// Seals and opens packets for one direction's keys.
class PacketProtector {
 public:
  PacketProtector(crypto::AeadAlgorithm alg, const PacketKeys& keys);

  /// Short form: 0x40 | conn_id | masked pn | ciphertext || tag. `plaintext`
  /// must be at least kSampleSize bytes so a header-protection sample exists.
  Bytes seal_short(const ConnectionId& conn_id, std::uint64_t pn, ByteView plaintext) const;
  /// Long form: 0xC0|type | version | conn_id | pn | payload_len | ciphertext || tag.
  Bytes seal_long(LongType type, const ConnectionId& conn_id, std::uint64_t pn, ByteView plaintext) const;

  /// nullopt when authentication fails or the layout is wrong for this form.
  std::optional<OpenedPacket> open_short(ByteView datagram) const;
  std::optional<OpenedPacket> open_long(ByteView datagram) const;

  const PacketKeys& keys() const noexcept { return keys_; }

 private:
  PacketKeys keys_;
  crypto::Aead aead_;
};

}  // namespace spacelink::quic
