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

#include "spacelink/common/bytes.hpp"
#include "spacelink/common/random.hpp"

namespace spacelink::crypto {

using X25519Key = ByteArray<32>;
using Ed25519PublicKey = ByteArray<32>;
using Ed25519Seed = ByteArray<32>;
using Ed25519Signature = ByteArray<64>;

struct X25519KeyPair {
  X25519Key secret{};
  X25519Key public_key{};

  static X25519KeyPair generate(RandomSource& rng);
  static X25519KeyPair from_secret(const X25519Key& secret);
};

/// Diffie-Hellman; nullopt when the peer key yields the all-zero output.
std::optional<X25519Key> x25519(const X25519Key& secret, const X25519Key& peer_public);

/// Long-term signing identity, derived deterministically from a 32-byte seed.
class Ed25519Identity {
 public:
  static Ed25519Identity from_seed(const Ed25519Seed& seed);
  static Ed25519Identity generate(RandomSource& rng);

  const Ed25519PublicKey& public_key() const noexcept { return public_key_; }
  const Ed25519Seed& seed() const noexcept { return seed_; }
  Ed25519Signature sign(ByteView message) const;

 private:
  Ed25519Seed seed_{};
  Ed25519PublicKey public_key_{};
  ByteArray<64> secret_key_{};
};

bool ed25519_verify(const Ed25519PublicKey& key, ByteView message, const Ed25519Signature& signature);

/// OS entropy (libsodium randombytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

}  // namespace spacelink::crypto
