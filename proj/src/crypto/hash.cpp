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

#include "spacelink/crypto/hash.hpp"

#include <sodium.h>

#include "sodium_init.hpp"

namespace spacelink::crypto {

Sha256Digest sha256(ByteView data) {
  detail::ensure_sodium();
  Sha256Digest out{};
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

struct Sha256::State {
  crypto_hash_sha256_state st{};
};

Sha256::Sha256() : state_(std::make_unique<State>()) {
  detail::ensure_sodium();
  crypto_hash_sha256_init(&state_->st);
}

Sha256::~Sha256() = default;
Sha256::Sha256(const Sha256& other) : state_(std::make_unique<State>(*other.state_)) {}
Sha256& Sha256::operator=(const Sha256& other) {
  *state_ = *other.state_;
  return *this;
}

Sha256& Sha256::update(ByteView data) {
  crypto_hash_sha256_update(&state_->st, data.data(), data.size());
  return *this;
}

Sha256Digest Sha256::finish() {
  Sha256Digest out{};
  crypto_hash_sha256_final(&state_->st, out.data());
  return out;
}

Sha256Digest hmac_sha256(ByteView key, ByteView message) {
  detail::ensure_sodium();
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, message.data(), message.size());
  Sha256Digest out{};
  crypto_auth_hmacsha256_final(&st, out.data());
  sodium_memzero(&st, sizeof st);
  return out;
}

Sha256Digest hkdf_extract(ByteView salt, ByteView ikm) {
  // An empty salt means HashLen zero bytes.
  static const Sha256Digest kZeroSalt{};
  return hmac_sha256(salt.empty() ? ByteView(kZeroSalt) : salt, ikm);
}

Bytes hkdf_expand(ByteView prk, ByteView info, std::size_t length) {
  if (length > 255 * kSha256Size) throw Error(Errc::InvalidConfig, "hkdf_expand length too large");
  Bytes out;
  out.reserve(length);
  Bytes block;
  Sha256Digest t{};
  std::size_t t_len = 0;
  for (std::uint8_t counter = 1; out.size() < length; ++counter) {
    block.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t_len));
    block.insert(block.end(), info.begin(), info.end());
    block.push_back(counter);
    t = hmac_sha256(prk, block);
    t_len = t.size();
    auto take = std::min(length - out.size(), t.size());
    out.insert(out.end(), t.begin(), t.begin() + static_cast<std::ptrdiff_t>(take));
  }
  secure_wipe(t);
  return out;
}

void secure_wipe(std::span<std::uint8_t> data) noexcept {
  if (!data.empty()) sodium_memzero(data.data(), data.size());
}

}  // namespace spacelink::crypto
