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

#include <string>

#include "spacelink/common/bytes.hpp"
#include "spacelink/common/kv_config.hpp"
#include "spacelink/common/random.hpp"
#include "spacelink/quic/session.hpp"

#ifndef SPACELINK_FIXTURE_DIR
#error "SPACELINK_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace spacelink::testing {

/// One oracle-generated `name = hex` file from tests/fixtures.
class Fixture {
 public:
  explicit Fixture(const std::string& file) : cfg_(KeyValueConfig::load(std::string(SPACELINK_FIXTURE_DIR) + "/" + file)) {}

  Bytes bytes(const std::string& key) const { return from_hex(require(key)); }
  template <std::size_t N>
  ByteArray<N> array(const std::string& key) const {
    return array_from_hex<N>(require(key));
  }
  std::int64_t integer(const std::string& key) const { return cfg_.get_int(key, -1); }
  std::string text(const std::string& key) const { return require(key); }

 private:
  std::string require(const std::string& key) const {
    auto v = cfg_.find(key);
    if (!v) throw Error(Errc::InvalidConfig, "fixture key missing: " + key);
    return *v;
  }
  KeyValueConfig cfg_;
};

inline Bytes random_bytes(Xoshiro256& rng, std::size_t n) {
  Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.next());
  return out;
}

/// Client and server sessions wired back to back with no channel in between.
struct SessionPair {
  crypto::Ed25519Identity identity;
  quic::TicketStore tickets;
  SeededRandom client_rng;
  SeededRandom server_rng;
  quic::Session client;
  quic::Session server;

  explicit SessionPair(std::uint64_t seed, quic::SessionConfig cfg = {},
                       std::optional<crypto::Ed25519PublicKey> pinned = std::nullopt)
      : identity(crypto::Ed25519Identity::from_seed(seed_for(seed))),
        client_rng(seed * 2 + 1),
        server_rng(seed * 2 + 2),
        client(quic::Session::client(cfg, pinned.value_or(identity.public_key()), client_rng)),
        server(quic::Session::server(cfg, identity, tickets, server_rng)) {}

  /// Moves every pending datagram across until both sides go quiet.
  void pump(Micros now) {
    for (bool moved = true; moved;) {
      moved = false;
      while (auto d = client.poll_transmit(now)) {
        server.on_datagram(*d, now);
        moved = true;
      }
      while (auto d = server.poll_transmit(now)) {
        client.on_datagram(*d, now);
        moved = true;
      }
    }
  }

  void handshake(Micros now = Micros{0}) {
    server.on_datagram(client.client_hello(now), now);
    pump(now);
  }

  static crypto::Ed25519Seed seed_for(std::uint64_t seed) {
    crypto::Ed25519Seed s{};
    SeededRandom(seed ^ 0x1d3a7e5bULL).fill(s);
    return s;
  }
};

}  // namespace spacelink::testing
