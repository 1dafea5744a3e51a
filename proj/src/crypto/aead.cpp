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

#include "spacelink/crypto/aead.hpp"

#include <sodium.h>

#include "sodium_init.hpp"

namespace spacelink::crypto {

namespace detail {
void ensure_sodium() {
  static const bool ok = [] { return sodium_init() >= 0; }();
  if (!ok) throw Error(Errc::CryptoUnavailable, "sodium_init failed");
}
}  // namespace detail

std::string_view to_string(AeadAlgorithm alg) noexcept {
  switch (alg) {
    case AeadAlgorithm::Aes256Gcm: return "gcm";
    case AeadAlgorithm::ChaCha20Poly1305: return "chacha";
  }
  return "unknown";
}

AeadAlgorithm parse_aead_algorithm(std::string_view name) {
  if (name == "gcm" || name == "aes256gcm") return AeadAlgorithm::Aes256Gcm;
  if (name == "chacha" || name == "chacha20poly1305") return AeadAlgorithm::ChaCha20Poly1305;
  throw Error(Errc::InvalidConfig, "unknown AEAD backend: " + std::string(name));
}

bool aead_available(AeadAlgorithm alg) noexcept {
  try {
    detail::ensure_sodium();
  } catch (const Error&) {
    return false;
  }
  if (alg == AeadAlgorithm::Aes256Gcm) return crypto_aead_aes256gcm_is_available() != 0;
  return true;
}

struct Aead::State {
  AeadKey key{};
  crypto_aead_aes256gcm_state gcm{};

  ~State() {
    sodium_memzero(key.data(), key.size());
    sodium_memzero(&gcm, sizeof gcm);
  }
};

Aead::Aead(AeadAlgorithm alg, const AeadKey& key) : alg_(alg), state_(std::make_unique<State>()) {
  detail::ensure_sodium();
  if (!aead_available(alg)) throw Error(Errc::CryptoUnavailable, "AES-256-GCM requires AES-NI");
  state_->key = key;
  if (alg_ == AeadAlgorithm::Aes256Gcm) crypto_aead_aes256gcm_beforenm(&state_->gcm, key.data());
}

Aead::Aead(const Aead& other) : Aead(other.alg_, other.state_->key) {}

Aead& Aead::operator=(const Aead& other) {
  if (this != &other) *this = Aead(other);
  return *this;
}

Aead::Aead(Aead&&) noexcept = default;
Aead& Aead::operator=(Aead&&) noexcept = default;
Aead::~Aead() = default;

void Aead::seal(const AeadNonce& nonce, ByteView aad, ByteView plaintext, Bytes& out) const {
  const auto offset = out.size();
  out.resize(offset + plaintext.size() + kAeadTagSize);
  unsigned long long written = 0;
  if (alg_ == AeadAlgorithm::Aes256Gcm) {
    crypto_aead_aes256gcm_encrypt_afternm(out.data() + offset, &written, plaintext.data(), plaintext.size(),
                                          aad.data(), aad.size(), nullptr, nonce.data(), &state_->gcm);
  } else {
    crypto_aead_chacha20poly1305_ietf_encrypt(out.data() + offset, &written, plaintext.data(), plaintext.size(),
                                              aad.data(), aad.size(), nullptr, nonce.data(), state_->key.data());
  }
  out.resize(offset + written);
}

bool Aead::open(const AeadNonce& nonce, ByteView aad, ByteView ciphertext_and_tag, Bytes& out) const {
  if (ciphertext_and_tag.size() < kAeadTagSize) return false;
  const auto offset = out.size();
  out.resize(offset + ciphertext_and_tag.size() - kAeadTagSize);
  unsigned long long written = 0;
  int rc = 0;
  if (alg_ == AeadAlgorithm::Aes256Gcm) {
    rc = crypto_aead_aes256gcm_decrypt_afternm(out.data() + offset, &written, nullptr, ciphertext_and_tag.data(),
                                               ciphertext_and_tag.size(), aad.data(), aad.size(), nonce.data(),
                                               &state_->gcm);
  } else {
    rc = crypto_aead_chacha20poly1305_ietf_decrypt(out.data() + offset, &written, nullptr, ciphertext_and_tag.data(),
                                                   ciphertext_and_tag.size(), aad.data(), aad.size(), nonce.data(),
                                                   state_->key.data());
  }
  if (rc != 0) {
    out.resize(offset);
    return false;
  }
  out.resize(offset + written);
  return true;
}

}  // namespace spacelink::crypto
