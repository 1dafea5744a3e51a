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

#include "spacelink/crypto/asymmetric.hpp"

#include <sodium.h>

#include "sodium_init.hpp"

namespace spacelink::crypto {

X25519KeyPair X25519KeyPair::generate(RandomSource& rng) {
  X25519Key secret{};
  rng.fill(secret);
  return from_secret(secret);
}

X25519KeyPair X25519KeyPair::from_secret(const X25519Key& secret) {
  detail::ensure_sodium();
  X25519KeyPair kp;
  kp.secret = secret;
  crypto_scalarmult_base(kp.public_key.data(), kp.secret.data());
  return kp;
}

std::optional<X25519Key> x25519(const X25519Key& secret, const X25519Key& peer_public) {
  detail::ensure_sodium();
  X25519Key shared{};
  if (crypto_scalarmult(shared.data(), secret.data(), peer_public.data()) != 0) return std::nullopt;
  return shared;
}

Ed25519Identity Ed25519Identity::from_seed(const Ed25519Seed& seed) {
  detail::ensure_sodium();
  Ed25519Identity id;
  id.seed_ = seed;
  crypto_sign_seed_keypair(id.public_key_.data(), id.secret_key_.data(), seed.data());
  return id;
}

Ed25519Identity Ed25519Identity::generate(RandomSource& rng) {
  Ed25519Seed seed{};
  rng.fill(seed);
  return from_seed(seed);
}

Ed25519Signature Ed25519Identity::sign(ByteView message) const {
  Ed25519Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), secret_key_.data());
  return sig;
}

bool ed25519_verify(const Ed25519PublicKey& key, ByteView message, const Ed25519Signature& signature) {
  detail::ensure_sodium();
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), key.data()) == 0;
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  detail::ensure_sodium();
  randombytes_buf(out.data(), out.size());
}

}  // namespace spacelink::crypto
