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
#include <memory>
#include <string_view>

#include "spacelink/common/bytes.hpp"

namespace spacelink::crypto {

inline constexpr std::size_t kAeadKeySize = 32;
inline constexpr std::size_t kAeadNonceSize = 12;
inline constexpr std::size_t kAeadTagSize = 16;

using AeadKey = ByteArray<kAeadKeySize>;
using AeadNonce = ByteArray<kAeadNonceSize>;

/// The two interchangeable AEAD backends. Numeric values appear in serialized state.
enum class AeadAlgorithm : std::uint8_t {
  Aes256Gcm = 1,
  ChaCha20Poly1305 = 2,
};

std::string_view to_string(AeadAlgorithm alg) noexcept;
AeadAlgorithm parse_aead_algorithm(std::string_view name);

/// Whether the running CPU supports the backend (AES-GCM needs AES-NI + CLMUL).
bool aead_available(AeadAlgorithm alg) noexcept;

/// A keyed AEAD instance. For AES-256-GCM the expanded key schedule is
/// computed once at construction.
class Aead {
 public:
  Aead(AeadAlgorithm alg, const AeadKey& key);
  Aead(const Aead& other);
  Aead& operator=(const Aead& other);
  Aead(Aead&&) noexcept;
  Aead& operator=(Aead&&) noexcept;
  ~Aead();

  AeadAlgorithm algorithm() const noexcept { return alg_; }

  /// Appends ciphertext || tag to `out`.
  void seal(const AeadNonce& nonce, ByteView aad, ByteView plaintext, Bytes& out) const;
  /// Appends the plaintext to `out` and returns true iff the tag verifies;
  /// `out` is left unchanged on failure.
  bool open(const AeadNonce& nonce, ByteView aad, ByteView ciphertext_and_tag, Bytes& out) const;

 private:
  struct State;
  AeadAlgorithm alg_;
  std::unique_ptr<State> state_;
};

}  // namespace spacelink::crypto
