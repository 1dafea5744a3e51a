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

#include <cstdint>
#include <map>
#include <string>

#include "spacelink/crypto/aead.hpp"
#include "spacelink/packet/space_packet.hpp"

namespace spacelink::sdls {

inline constexpr std::size_t kSecHeaderSize = 10;  // spi(2) | seq(8)
inline constexpr std::size_t kFrameOverhead = packet::kPrimaryHeaderSize + kSecHeaderSize + crypto::kAeadTagSize;
inline constexpr std::size_t kReplayWindowWidth = 64;

/// Which end of the link owns this copy of the SA. The two ends send from
/// disjoint halves of the 64-bit sequence space, so a shared key never sees a
/// repeated nonce: ground uses [0, 2^63), flight uses [2^63, 2^64 - 1).
enum class SaRole : std::uint8_t { Ground = 0, Flight = 1 };

struct SaParameters {
  std::uint16_t spi = 0;
  crypto::AeadKey key{};
  ByteArray<4> iv_base{};
  crypto::AeadAlgorithm algorithm = crypto::AeadAlgorithm::Aes256Gcm;
};

/// Symmetric keying state shared by the two ends of a link.
///
/// Secured frame layout:
///   primary header (6, cleartext) | spi (2 BE) | seq (8 BE) | ciphertext | tag (16)
/// nonce = iv_base || seq (BE), AAD = primary header || spi || seq.
class SecurityAssociation {
 public:
  SecurityAssociation(const SaParameters& params, SaRole role);

  std::uint16_t spi() const noexcept { return params_.spi; }
  SaRole role() const noexcept { return role_; }
  crypto::AeadAlgorithm algorithm() const noexcept { return params_.algorithm; }
  std::uint64_t send_seq() const noexcept { return send_seq_; }
  std::uint64_t highest_recv_seq() const noexcept { return highest_recv_; }
  std::uint64_t replay_bitmap() const noexcept { return window_; }
  bool received_any() const noexcept { return received_any_; }

  /// Protects one packet under the next send sequence number. Throws SeqExhausted.
  Bytes apply(const packet::SpacePacket& p);

  /// Verifies, decrypts and records the frame in the replay window. Throws
  /// Truncated/BadVersion/UnsupportedHeader/LengthMismatch on framing errors,
  /// UnknownSpi, AuthFail, or Replay. State is untouched on any failure.
  packet::SpacePacket accept(ByteView frame);

  /// Would `seq` pass the replay window right now?
  bool replay_accepts(std::uint64_t seq) const noexcept;

  /// Deterministic serialized state: format(1) alg(1) flags(1) spi(2) key(32)
  /// iv_base(4) send_seq(8) highest_recv(8) window(8).
  Bytes serialize_state() const;
  std::size_t state_footprint() const noexcept { return kSerializedSize; }

  static constexpr std::size_t kSerializedSize = 3 + 2 + 32 + 4 + 8 + 8 + 8;

  /// Exposes the first/last sequence number a role may send with.
  static std::uint64_t first_seq(SaRole role) noexcept;
  static std::uint64_t seq_limit(SaRole role) noexcept;

 private:
  void record_received(std::uint64_t seq) noexcept;
  crypto::AeadNonce nonce_for(std::uint64_t seq) const noexcept;

  SaParameters params_;
  SaRole role_;
  crypto::Aead aead_;
  std::uint64_t send_seq_;
  std::uint64_t highest_recv_ = 0;
  std::uint64_t window_ = 0;  // bit i set <=> highest_recv_ - i was received
  bool received_any_ = false;
};

/// Parses the SPI out of a secured frame without verifying anything.
std::uint16_t frame_spi(ByteView frame);

/// SPI-indexed set of live associations on one endpoint.
class KeyStore {
 public:
  void add(SecurityAssociation sa);
  SecurityAssociation* find(std::uint16_t spi);
  const SecurityAssociation* find(std::uint16_t spi) const;

  /// Routes by SPI; throws UnknownSpi for an SPI with no SA.
  packet::SpacePacket accept(ByteView frame);

  std::size_t size() const noexcept { return sas_.size(); }
  std::size_t state_footprint() const noexcept;

 private:
  std::map<std::uint16_t, SecurityAssociation> sas_;
};

/// Reads `sa.<spi>.key = <64 hex>` / `sa.<spi>.iv = <8 hex>` / optional
/// `sa.<spi>.algorithm = gcm|chacha` entries from a key-value file.
std::map<std::uint16_t, SaParameters> load_key_file(const std::string& path);
std::map<std::uint16_t, SaParameters> parse_key_config(std::string_view text);

}  // namespace spacelink::sdls
