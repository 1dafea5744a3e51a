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
#include <string_view>

#include "spacelink/crypto/hash.hpp"
#include "spacelink/quic/types.hpp"

namespace spacelink::quic {

/// Salt for the connection-id-derived Initial keys (exactly 20 ASCII bytes).
inline constexpr std::string_view kInitialSalt = "spacelink initial v1";

/// Everything the extract/expand chain produces for one handshake.
struct ApplicationSecrets {
  Secret early_secret{};
  Secret handshake_secret{};
  Secret client_secret{};  // "c ap"
  Secret server_secret{};  // "s ap"
  DirectionalKeys keys;
};

/// early    = Extract(0^32, psk or 0^32)
/// hs       = Extract(Expand(early, "derived", 32), shared)
/// secret_d = Expand(hs, d || transcript, 32)      d in {"c ap", "s ap"}
/// key/iv/hp = Expand(secret_d, "key"/"iv"/"hp", 32/12/32)
ApplicationSecrets derive_secrets(const std::optional<Secret>& psk, const Secret& shared,
                                  const crypto::Sha256Digest& transcript);

PacketKeys expand_packet_keys(const Secret& traffic_secret);

/// Obfuscation keys for handshake packets; anyone who sees the connection id
/// can derive them.
DirectionalKeys derive_initial_keys(const ConnectionId& conn_id);

/// Client 0-RTT keys: Expand(Extract(0^32, psk), "c e ap" || SHA-256(ClientHello), 32).
PacketKeys derive_early_keys(const Secret& psk, const crypto::Sha256Digest& client_hello_hash);

/// Secret bound to a freshly issued ticket: Expand(hs, "res" || transcript, 32).
Secret derive_resumption_secret(const Secret& handshake_secret, const crypto::Sha256Digest& transcript);

}  // namespace spacelink::quic
