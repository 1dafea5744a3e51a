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
#include <optional>

#include "spacelink/common/bytes.hpp"

namespace spacelink::packet {

enum class PacketType : std::uint8_t { Telemetry = 0, Command = 1 };

inline constexpr std::size_t kPrimaryHeaderSize = 6;
inline constexpr std::uint16_t kMaxApid = 0x07ff;
inline constexpr std::uint16_t kMaxSeqCount = 0x3fff;
inline constexpr std::size_t kMaxPayloadSize = 65536;
/// Sequence flags are always "unsegmented".
inline constexpr std::uint8_t kSeqFlagsUnsegmented = 0b11;

/// A CCSDS-style space packet without a secondary header.
///
/// Wire layout (big-endian):
///   bytes 0-1  version(3)=0 | type(1) | sec_hdr_flag(1)=0 | apid(11)
///   bytes 2-3  seq_flags(2)=0b11 | seq_count(14)
///   bytes 4-5  payload length - 1
struct SpacePacket {
  PacketType type = PacketType::Telemetry;
  std::uint16_t apid = 0;
  std::uint16_t seq_count = 0;
  Bytes payload;

  bool operator==(const SpacePacket&) const = default;
};

using PrimaryHeaderBytes = ByteArray<kPrimaryHeaderSize>;

struct PrimaryHeader {
  PacketType type = PacketType::Telemetry;
  std::uint16_t apid = 0;
  std::uint16_t seq_count = 0;
  std::size_t payload_size = 0;
};

/// Validates field ranges; throws EmptyPayload or FieldOverflow.
PrimaryHeaderBytes encode_header(PacketType type, std::uint16_t apid, std::uint16_t seq_count,
                                 std::size_t payload_size);
/// Reads the first six bytes of `data`; throws Truncated, BadVersion or UnsupportedHeader.
PrimaryHeader decode_header(ByteView data);

Bytes encode(const SpacePacket& p);
void encode_into(const SpacePacket& p, Bytes& out);

/// Exact-length decode. Throws Truncated (short input), BadVersion,
/// UnsupportedHeader (secondary header or segmented), LengthMismatch (trailing bytes).
SpacePacket decode(ByteView data);

inline std::size_t encoded_size(const SpacePacket& p) { return kPrimaryHeaderSize + p.payload.size(); }

/// Splits a byte stream carrying back-to-back space packets.
class PacketDeframer {
 public:
  void push(ByteView data) { buffer_.insert(buffer_.end(), data.begin(), data.end()); }

  /// Next complete packet, or nullopt if more bytes are needed. Throws on a
  /// malformed header; the buffer is cleared first so the stream can resync
  /// on the caller's terms.
  std::optional<SpacePacket> next();

  std::size_t buffered() const noexcept { return buffer_.size() - read_pos_; }

 private:
  Bytes buffer_;
  std::size_t read_pos_ = 0;
};

}  // namespace spacelink::packet
