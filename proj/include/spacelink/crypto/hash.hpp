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

#include <memory>

#include "spacelink/common/bytes.hpp"

namespace spacelink::crypto {

inline constexpr std::size_t kSha256Size = 32;
using Sha256Digest = ByteArray<kSha256Size>;

Sha256Digest sha256(ByteView data);

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256& other);
  Sha256& operator=(const Sha256& other);

  Sha256& update(ByteView data);
  Sha256Digest finish();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

Sha256Digest hmac_sha256(ByteView key, ByteView message);

// RFC 5869 with SHA-256.
Sha256Digest hkdf_extract(ByteView salt, ByteView ikm);
Bytes hkdf_expand(ByteView prk, ByteView info, std::size_t length);

/// Overwrites memory in a way the optimizer cannot elide.
void secure_wipe(std::span<std::uint8_t> data) noexcept;

}  // namespace spacelink::crypto
