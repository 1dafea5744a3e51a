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

#include <map>
#include <optional>

#include "spacelink/crypto/asymmetric.hpp"
#include "spacelink/crypto/hash.hpp"
#include "spacelink/quic/types.hpp"

namespace spacelink::quic {

inline constexpr std::size_t kTicketIdentitySize = 16;

/// client_random(32) | eph_pub(32) | ticket_len u16 | ticket
struct ClientHello {
  ByteArray<32> random{};
  crypto::X25519Key eph_pub{};
  Bytes ticket;

  Bytes encode() const;
  /// Throws MalformedHello on truncation or trailing bytes.
  static ClientHello decode(ByteView data);
  bool operator==(const ClientHello&) const = default;
};

/// server_random(32) | eph_pub(32) | flags u8 | sig_len u16 | sig | ticket_len u16 | ticket
/// flags bit 0: early data accepted.
struct ServerHello {
  ByteArray<32> random{};
  crypto::X25519Key eph_pub{};
  bool early_data_accepted = false;
  crypto::Ed25519Signature signature{};
  Bytes ticket;

  Bytes encode() const;
  /// The signed form: the same fields without sig_len and sig.
  Bytes encode_unsigned() const;
  static ServerHello decode(ByteView data);
  bool operator==(const ServerHello&) const = default;
};

/// SHA-256(ClientHello || ServerHello without signature).
crypto::Sha256Digest handshake_transcript(ByteView client_hello, ByteView server_hello_unsigned);

/// What a client keeps to resume: the opaque identity and its secret.
struct ResumptionTicket {
  Bytes identity;
  Secret secret{};
};

/// Server-side ticket table. Redemption is single use so replayed
/// ClientHellos cannot unlock the same early data twice.
class TicketStore {
 public:
  explicit TicketStore(std::size_t capacity = 16) : capacity_(capacity) {}

  Bytes new_identity(RandomSource& rng) const;
  /// Evicts the oldest entry when full.
  void store(ByteView identity, const Secret& secret);
  /// Removes and returns the secret. nullopt (TicketUnknown) if absent.
  std::optional<Secret> redeem(ByteView identity);

  std::size_t size() const noexcept { return tickets_.size(); }
  std::size_t footprint() const noexcept { return tickets_.size() * (kTicketIdentitySize + 32 + 8); }

 private:
  std::size_t capacity_;
  std::uint64_t counter_ = 0;
  std::map<Bytes, std::pair<std::uint64_t, Secret>> tickets_;
};

}  // namespace spacelink::quic
