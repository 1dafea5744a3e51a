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

#include "spacelink/common/bytes.hpp"
#include "spacelink/common/time.hpp"

namespace spacelink::quic {

inline constexpr std::uint32_t kVersion = 0x53510001;
inline constexpr std::size_t kMss = 1200;
inline constexpr std::size_t kConnectionIdSize = 8;
inline constexpr std::size_t kShortHeaderSize = 13;  // byte0 | conn_id(8) | pn(4)
inline constexpr std::size_t kLongHeaderSize = 19;   // byte0 | version(4) | conn_id(8) | pn(4) | len(2)
inline constexpr std::size_t kTagSize = 16;
inline constexpr std::size_t kSampleSize = 16;
inline constexpr std::size_t kMaxDatagramData = 1100;
inline constexpr std::size_t kMaxShortPayload = kMss - kShortHeaderSize - kTagSize;
inline constexpr std::size_t kMaxLongPayload = kMss - kLongHeaderSize - kTagSize;
inline constexpr std::uint64_t kMaxPacketNumber = 0xffffffffULL;

inline constexpr std::uint8_t kShortFormByte = 0x40;
inline constexpr std::uint8_t kLongFormBits = 0xc0;

enum class LongType : std::uint8_t { Initial = 0x00, ZeroRtt = 0x01 };

using ConnectionId = ByteArray<kConnectionIdSize>;
using Secret = ByteArray<32>;

/// AEAD key, IV and header-protection key for one direction.
struct PacketKeys {
  ByteArray<32> key{};
  ByteArray<12> iv{};
  ByteArray<32> hp{};

  bool operator==(const PacketKeys&) const = default;
  static constexpr std::size_t kSerializedSize = 32 + 12 + 32;
};

struct DirectionalKeys {
  PacketKeys client;  // client -> server
  PacketKeys server;  // server -> client

  bool operator==(const DirectionalKeys&) const = default;
};

enum class Role : std::uint8_t { Client, Server };
enum class State : std::uint8_t { Initial, Handshaking, Established, Closed };

// CONNECTION_CLOSE codes.
inline constexpr std::uint16_t kNoError = 0x00;
inline constexpr std::uint16_t kProtocolViolation = 0x0a;
inline constexpr std::uint16_t kFrameEncodingError = 0x07;
inline constexpr std::uint16_t kHandshakeFailure = 0x0128;

}  // namespace spacelink::quic
