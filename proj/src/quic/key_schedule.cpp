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

#include "spacelink/quic/key_schedule.hpp"

namespace spacelink::quic {

namespace {
ByteView label(std::string_view s) { return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}; }

template <std::size_t N>
ByteArray<N> expand_into(ByteView prk, ByteView info) {
  auto raw = crypto::hkdf_expand(prk, info, N);
  ByteArray<N> out{};
  std::copy(raw.begin(), raw.end(), out.begin());
  crypto::secure_wipe(raw);
  return out;
}

Secret expand_with_transcript(const Secret& prk, std::string_view prefix, const crypto::Sha256Digest& transcript) {
  Bytes info(prefix.begin(), prefix.end());
  info.insert(info.end(), transcript.begin(), transcript.end());
  return expand_into<32>(prk, info);
}

Secret compute_early_secret(const std::optional<Secret>& psk) {
  static const Secret kZero{};
  return crypto::hkdf_extract(kZero, psk ? ByteView(*psk) : ByteView(kZero));
}
}  // namespace

PacketKeys expand_packet_keys(const Secret& traffic_secret) {
  PacketKeys k;
  k.key = expand_into<32>(traffic_secret, label("key"));
  k.iv = expand_into<12>(traffic_secret, label("iv"));
  k.hp = expand_into<32>(traffic_secret, label("hp"));
  return k;
}

ApplicationSecrets derive_secrets(const std::optional<Secret>& psk, const Secret& shared,
                                  const crypto::Sha256Digest& transcript) {
  ApplicationSecrets s;
  s.early_secret = compute_early_secret(psk);
  const auto derived = expand_into<32>(s.early_secret, label("derived"));
  s.handshake_secret = crypto::hkdf_extract(derived, shared);
  s.client_secret = expand_with_transcript(s.handshake_secret, "c ap", transcript);
  s.server_secret = expand_with_transcript(s.handshake_secret, "s ap", transcript);
  s.keys.client = expand_packet_keys(s.client_secret);
  s.keys.server = expand_packet_keys(s.server_secret);
  return s;
}

DirectionalKeys derive_initial_keys(const ConnectionId& conn_id) {
  const auto initial = crypto::hkdf_extract(label(kInitialSalt), conn_id);
  DirectionalKeys keys;
  keys.client = expand_packet_keys(expand_into<32>(initial, label("c init")));
  keys.server = expand_packet_keys(expand_into<32>(initial, label("s init")));
  return keys;
}

PacketKeys derive_early_keys(const Secret& psk, const crypto::Sha256Digest& client_hello_hash) {
  const auto early = compute_early_secret(psk);
  return expand_packet_keys(expand_with_transcript(early, "c e ap", client_hello_hash));
}

Secret derive_resumption_secret(const Secret& handshake_secret, const crypto::Sha256Digest& transcript) {
  return expand_with_transcript(handshake_secret, "res", transcript);
}

}  // namespace spacelink::quic
