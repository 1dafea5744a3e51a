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
#include <variant>
#include <vector>

#include "spacelink/quic/types.hpp"

namespace spacelink::quic {

/// A run of `length` 0x00 bytes.
struct PaddingFrame {
  std::size_t length = 1;
  bool operator==(const PaddingFrame&) const = default;
};

struct PingFrame {
  bool operator==(const PingFrame&) const = default;
};

/// Wire form. Ranges follow QUIC gap semantics: the first range covers
/// [largest - first_range, largest]; each (gap, range) pair starts `gap + 2`
/// below the previous range's smallest packet number.
struct AckFrame {
  std::uint64_t largest = 0;
  std::uint32_t ack_delay_us = 0;
  std::uint16_t first_range = 0;
  std::vector<std::pair<std::uint16_t, std::uint16_t>> ranges;  // (gap, range)

  bool operator==(const AckFrame&) const = default;
};

struct CryptoFrame {
  std::uint32_t offset = 0;
  Bytes data;
  bool operator==(const CryptoFrame&) const = default;
};

struct StreamFrame {
  std::uint32_t stream_id = 0;
  std::uint64_t offset = 0;
  bool fin = false;
  Bytes data;
  bool operator==(const StreamFrame&) const = default;
};

struct DatagramFrame {
  Bytes data;
  bool operator==(const DatagramFrame&) const = default;
};

struct ConnectionCloseFrame {
  std::uint16_t code = 0;
  std::string reason;
  bool operator==(const ConnectionCloseFrame&) const = default;
};

using Frame = std::variant<PaddingFrame, PingFrame, AckFrame, CryptoFrame, StreamFrame, DatagramFrame,
                           ConnectionCloseFrame>;

namespace frame_type {
inline constexpr std::uint8_t kPadding = 0x00;
inline constexpr std::uint8_t kPing = 0x01;
inline constexpr std::uint8_t kAck = 0x02;
inline constexpr std::uint8_t kCrypto = 0x04;
inline constexpr std::uint8_t kStream = 0x06;
inline constexpr std::uint8_t kDatagram = 0x07;
inline constexpr std::uint8_t kConnectionClose = 0x1c;
}  // namespace frame_type

inline constexpr std::size_t kStreamFrameOverhead = 1 + 4 + 8 + 2 + 1;
inline constexpr std::size_t kDatagramFrameOverhead = 1 + 2;
inline constexpr std::size_t kCryptoFrameOverhead = 1 + 4 + 2;

std::size_t encoded_size(const Frame& frame);
void encode_frame(const Frame& frame, Bytes& out);
Bytes encode_frames(std::span<const Frame> frames);

/// Throws UnknownFrameType for an unassigned type byte and MalformedFrame for
/// a frame that runs past the end of the input.
std::vector<Frame> decode_frames(ByteView payload);

/// Everything except ACK, PADDING and CONNECTION_CLOSE.
bool is_ack_eliciting(const Frame& frame) noexcept;
/// Frames that must be resent when the packet carrying them is lost.
bool is_retransmittable(const Frame& frame) noexcept;

}  // namespace spacelink::quic
