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

#include "spacelink/packet/space_packet.hpp"

namespace spacelink::packet {

PrimaryHeaderBytes encode_header(PacketType type, std::uint16_t apid, std::uint16_t seq_count,
                                 std::size_t payload_size) {
  if (payload_size == 0) throw Error(Errc::EmptyPayload);
  if (payload_size > kMaxPayloadSize) throw Error(Errc::FieldOverflow, "payload exceeds 65536 bytes");
  if (apid > kMaxApid) throw Error(Errc::FieldOverflow, "apid exceeds 11 bits");
  if (seq_count > kMaxSeqCount) throw Error(Errc::FieldOverflow, "seq_count exceeds 14 bits");

  const std::uint16_t id = static_cast<std::uint16_t>((static_cast<unsigned>(type) << 12) | apid);
  const std::uint16_t seq = static_cast<std::uint16_t>((kSeqFlagsUnsegmented << 14) | seq_count);
  const auto len = static_cast<std::uint16_t>(payload_size - 1);
  return {static_cast<std::uint8_t>(id >> 8), static_cast<std::uint8_t>(id),
          static_cast<std::uint8_t>(seq >> 8), static_cast<std::uint8_t>(seq),
          static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len)};
}

PrimaryHeader decode_header(ByteView data) {
  if (data.size() < kPrimaryHeaderSize) throw Error(Errc::Truncated, "short primary header");
  const auto id = load_be16(data.data());
  const auto seq = load_be16(data.data() + 2);
  if ((id >> 13) != 0) throw Error(Errc::BadVersion);
  if ((id >> 11) & 1) throw Error(Errc::UnsupportedHeader, "secondary header flag set");
  if ((seq >> 14) != kSeqFlagsUnsegmented) throw Error(Errc::UnsupportedHeader, "segmented packet");
  PrimaryHeader h;
  h.type = static_cast<PacketType>((id >> 12) & 1);
  h.apid = id & kMaxApid;
  h.seq_count = seq & kMaxSeqCount;
  h.payload_size = std::size_t{load_be16(data.data() + 4)} + 1;
  return h;
}

void encode_into(const SpacePacket& p, Bytes& out) {
  const auto header = encode_header(p.type, p.apid, p.seq_count, p.payload.size());
  out.reserve(out.size() + kPrimaryHeaderSize + p.payload.size());
  out.insert(out.end(), header.begin(), header.end());
  out.insert(out.end(), p.payload.begin(), p.payload.end());
}

Bytes encode(const SpacePacket& p) {
  Bytes out;
  encode_into(p, out);
  return out;
}

SpacePacket decode(ByteView data) {
  if (data.size() < kPrimaryHeaderSize + 1) throw Error(Errc::Truncated, "packet shorter than 7 bytes");
  const auto h = decode_header(data);
  const auto body = data.subspan(kPrimaryHeaderSize);
  if (body.size() < h.payload_size) throw Error(Errc::Truncated, "body shorter than declared length");
  if (body.size() > h.payload_size) throw Error(Errc::LengthMismatch, "trailing bytes after packet");
  return SpacePacket{h.type, h.apid, h.seq_count, Bytes(body.begin(), body.end())};
}

std::optional<SpacePacket> PacketDeframer::next() {
  const ByteView pending(buffer_.data() + read_pos_, buffer_.size() - read_pos_);
  if (pending.size() < kPrimaryHeaderSize) return std::nullopt;
  PrimaryHeader h;
  try {
    h = decode_header(pending);
  } catch (const Error&) {
    buffer_.clear();
    read_pos_ = 0;
    throw;
  }
  const auto total = kPrimaryHeaderSize + h.payload_size;
  if (pending.size() < total) return std::nullopt;
  auto packet = decode(pending.first(total));
  read_pos_ += total;
  if (read_pos_ == buffer_.size()) {
    buffer_.clear();
    read_pos_ = 0;
  } else if (read_pos_ > 4096) {
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(read_pos_));
    read_pos_ = 0;
  }
  return packet;
}

}  // namespace spacelink::packet
