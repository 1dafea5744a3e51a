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

#include "spacelink/quic/frame.hpp"

namespace spacelink::quic {

namespace {
template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint16_t checked_u16(std::size_t n, const char* what) {
  if (n > 0xffff) throw Error(Errc::Oversize, std::string(what) + " longer than 65535 bytes");
  return static_cast<std::uint16_t>(n);
}
}  // namespace

std::size_t encoded_size(const Frame& frame) {
  return std::visit(Overloaded{
                        [](const PaddingFrame& f) -> std::size_t { return f.length; },
                        [](const PingFrame&) -> std::size_t { return 1; },
                        [](const AckFrame& f) -> std::size_t { return 1 + 8 + 4 + 1 + 2 + 4 * f.ranges.size(); },
                        [](const CryptoFrame& f) -> std::size_t { return kCryptoFrameOverhead + f.data.size(); },
                        [](const StreamFrame& f) -> std::size_t { return kStreamFrameOverhead + f.data.size(); },
                        [](const DatagramFrame& f) -> std::size_t { return kDatagramFrameOverhead + f.data.size(); },
                        [](const ConnectionCloseFrame& f) -> std::size_t { return 1 + 2 + 2 + f.reason.size(); },
                    },
                    frame);
}

void encode_frame(const Frame& frame, Bytes& out) {
  ByteWriter w(out);
  std::visit(Overloaded{
                 [&](const PaddingFrame& f) { w.zeros(f.length); },
                 [&](const PingFrame&) { w.u8(frame_type::kPing); },
                 [&](const AckFrame& f) {
                   if (f.ranges.size() > 255) throw Error(Errc::MalformedAck, "more than 255 ranges");
                   w.u8(frame_type::kAck);
                   w.u64(f.largest);
                   w.u32(f.ack_delay_us);
                   w.u8(static_cast<std::uint8_t>(f.ranges.size()));
                   w.u16(f.first_range);
                   for (auto [gap, range] : f.ranges) {
                     w.u16(gap);
                     w.u16(range);
                   }
                 },
                 [&](const CryptoFrame& f) {
                   w.u8(frame_type::kCrypto);
                   w.u32(f.offset);
                   w.u16(checked_u16(f.data.size(), "CRYPTO data"));
                   w.bytes(f.data);
                 },
                 [&](const StreamFrame& f) {
                   w.u8(frame_type::kStream);
                   w.u32(f.stream_id);
                   w.u64(f.offset);
                   w.u16(checked_u16(f.data.size(), "STREAM data"));
                   w.u8(f.fin ? 1 : 0);
                   w.bytes(f.data);
                 },
                 [&](const DatagramFrame& f) {
                   w.u8(frame_type::kDatagram);
                   w.u16(checked_u16(f.data.size(), "DATAGRAM data"));
                   w.bytes(f.data);
                 },
                 [&](const ConnectionCloseFrame& f) {
                   w.u8(frame_type::kConnectionClose);
                   w.u16(f.code);
                   w.u16(checked_u16(f.reason.size(), "close reason"));
                   w.bytes(ByteView(reinterpret_cast<const std::uint8_t*>(f.reason.data()), f.reason.size()));
                 },
             },
             frame);
}

Bytes encode_frames(std::span<const Frame> frames) {
  Bytes out;
  std::size_t total = 0;
  for (const auto& f : frames) total += encoded_size(f);
  out.reserve(total);
  for (const auto& f : frames) encode_frame(f, out);
  return out;
}

std::vector<Frame> decode_frames(ByteView payload) {
  std::vector<Frame> frames;
  ByteReader r(payload);
  try {
    while (!r.empty()) {
      const auto type = r.u8();
      switch (type) {
        case frame_type::kPadding: {
          std::size_t run = 1;
          while (!r.empty() && payload[r.position()] == 0) {
            r.u8();
            ++run;
          }
          frames.emplace_back(PaddingFrame{run});
          break;
        }
        case frame_type::kPing:
          frames.emplace_back(PingFrame{});
          break;
        case frame_type::kAck: {
          AckFrame f;
          f.largest = r.u64();
          f.ack_delay_us = r.u32();
          const auto count = r.u8();
          f.first_range = r.u16();
          f.ranges.reserve(count);
          for (int i = 0; i < count; ++i) {
            const auto gap = r.u16();
            const auto range = r.u16();
            f.ranges.emplace_back(gap, range);
          }
          frames.emplace_back(std::move(f));
          break;
        }
        case frame_type::kCrypto: {
          CryptoFrame f;
          f.offset = r.u32();
          const auto len = r.u16();
          auto data = r.take(len);
          f.data.assign(data.begin(), data.end());
          frames.emplace_back(std::move(f));
          break;
        }
        case frame_type::kStream: {
          StreamFrame f;
          f.stream_id = r.u32();
          f.offset = r.u64();
          const auto len = r.u16();
          const auto fin = r.u8();
          if (fin > 1) throw Error(Errc::MalformedFrame, "fin flag must be 0 or 1");
          f.fin = fin == 1;
          auto data = r.take(len);
          f.data.assign(data.begin(), data.end());
          frames.emplace_back(std::move(f));
          break;
        }
        case frame_type::kDatagram: {
          DatagramFrame f;
          const auto len = r.u16();
          auto data = r.take(len);
          f.data.assign(data.begin(), data.end());
          frames.emplace_back(std::move(f));
          break;
        }
        case frame_type::kConnectionClose: {
          ConnectionCloseFrame f;
          f.code = r.u16();
          const auto len = r.u16();
          auto reason = r.take(len);
          f.reason.assign(reason.begin(), reason.end());
          frames.emplace_back(std::move(f));
          break;
        }
        default:
          throw Error(Errc::UnknownFrameType, "frame type " + std::to_string(type));
      }
    }
  } catch (const Error& e) {
    if (e.code() == Errc::Truncated) throw Error(Errc::MalformedFrame, e.what());
    throw;
  }
  return frames;
}

bool is_ack_eliciting(const Frame& frame) noexcept {
  return !std::holds_alternative<AckFrame>(frame) && !std::holds_alternative<PaddingFrame>(frame) &&
         !std::holds_alternative<ConnectionCloseFrame>(frame);
}

bool is_retransmittable(const Frame& frame) noexcept {
  return std::holds_alternative<StreamFrame>(frame) || std::holds_alternative<CryptoFrame>(frame);
}

}  // namespace spacelink::quic
