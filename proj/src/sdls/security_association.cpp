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

#include "spacelink/sdls/security_association.hpp"

#include <limits>

#include "spacelink/common/kv_config.hpp"

namespace spacelink::sdls {

namespace {
constexpr std::uint64_t kHalf = std::uint64_t{1} << 63;
constexpr std::uint8_t kStateFormat = 1;

struct FrameView {
  packet::PrimaryHeader header;
  std::uint16_t spi;
  std::uint64_t seq;
  ByteView aad;
  ByteView sealed;
};

FrameView parse_frame(ByteView frame) {
  if (frame.size() < kFrameOverhead + 1) throw Error(Errc::Truncated, "secured frame too short");
  FrameView v;
  v.header = packet::decode_header(frame);
  const auto sealed_size = frame.size() - packet::kPrimaryHeaderSize - kSecHeaderSize;
  if (v.header.payload_size + crypto::kAeadTagSize != sealed_size) {
    throw Error(Errc::LengthMismatch, "declared length disagrees with frame size");
  }
  ByteReader r(frame.subspan(packet::kPrimaryHeaderSize, kSecHeaderSize));
  v.spi = r.u16();
  v.seq = r.u64();
  v.aad = frame.first(packet::kPrimaryHeaderSize + kSecHeaderSize);
  v.sealed = frame.subspan(packet::kPrimaryHeaderSize + kSecHeaderSize);
  return v;
}
}  // namespace

std::uint64_t SecurityAssociation::first_seq(SaRole role) noexcept { return role == SaRole::Ground ? 0 : kHalf; }

std::uint64_t SecurityAssociation::seq_limit(SaRole role) noexcept {
  return role == SaRole::Ground ? kHalf : std::numeric_limits<std::uint64_t>::max();
}

SecurityAssociation::SecurityAssociation(const SaParameters& params, SaRole role)
    : params_(params), role_(role), aead_(params.algorithm, params.key), send_seq_(first_seq(role)) {}

crypto::AeadNonce SecurityAssociation::nonce_for(std::uint64_t seq) const noexcept {
  crypto::AeadNonce n{};
  std::copy(params_.iv_base.begin(), params_.iv_base.end(), n.begin());
  for (int i = 0; i < 8; ++i) n[4 + i] = static_cast<std::uint8_t>(seq >> (56 - 8 * i));
  return n;
}

Bytes SecurityAssociation::apply(const packet::SpacePacket& p) {
  if (send_seq_ >= seq_limit(role_)) throw Error(Errc::SeqExhausted);
  const auto header = packet::encode_header(p.type, p.apid, p.seq_count, p.payload.size());
  Bytes frame;
  frame.reserve(kFrameOverhead + p.payload.size());
  ByteWriter w(frame);
  w.bytes(header);
  w.u16(params_.spi);
  w.u64(send_seq_);
  const Bytes aad(frame);
  aead_.seal(nonce_for(send_seq_), aad, p.payload, frame);
  ++send_seq_;
  return frame;
}

bool SecurityAssociation::replay_accepts(std::uint64_t seq) const noexcept {
  if (!received_any_ || seq > highest_recv_) return true;
  const auto age = highest_recv_ - seq;
  if (age >= kReplayWindowWidth) return false;
  return ((window_ >> age) & 1) == 0;
}

void SecurityAssociation::record_received(std::uint64_t seq) noexcept {
  if (!received_any_) {
    received_any_ = true;
    highest_recv_ = seq;
    window_ = 1;
    return;
  }
  if (seq > highest_recv_) {
    const auto shift = seq - highest_recv_;
    window_ = shift >= kReplayWindowWidth ? 0 : window_ << shift;
    window_ |= 1;
    highest_recv_ = seq;
  } else {
    window_ |= std::uint64_t{1} << (highest_recv_ - seq);
  }
}

packet::SpacePacket SecurityAssociation::accept(ByteView frame) {
  const auto v = parse_frame(frame);
  if (v.spi != params_.spi) throw Error(Errc::UnknownSpi, std::to_string(v.spi));
  Bytes payload;
  if (!aead_.open(nonce_for(v.seq), v.aad, v.sealed, payload)) throw Error(Errc::AuthFail);
  if (!replay_accepts(v.seq)) throw Error(Errc::Replay, "seq " + std::to_string(v.seq));
  record_received(v.seq);
  return packet::SpacePacket{v.header.type, v.header.apid, v.header.seq_count, std::move(payload)};
}

Bytes SecurityAssociation::serialize_state() const {
  Bytes out;
  out.reserve(kSerializedSize);
  ByteWriter w(out);
  w.u8(kStateFormat);
  w.u8(static_cast<std::uint8_t>(params_.algorithm));
  w.u8(static_cast<std::uint8_t>(static_cast<unsigned>(role_) | (received_any_ ? 0x02u : 0u)));
  w.u16(params_.spi);
  w.bytes(params_.key);
  w.bytes(params_.iv_base);
  w.u64(send_seq_);
  w.u64(highest_recv_);
  w.u64(window_);
  return out;
}

std::uint16_t frame_spi(ByteView frame) {
  if (frame.size() < packet::kPrimaryHeaderSize + 2) throw Error(Errc::Truncated, "no security header");
  return load_be16(frame.data() + packet::kPrimaryHeaderSize);
}

void KeyStore::add(SecurityAssociation sa) {
  const auto spi = sa.spi();
  sas_.insert_or_assign(spi, std::move(sa));
}

SecurityAssociation* KeyStore::find(std::uint16_t spi) {
  auto it = sas_.find(spi);
  return it == sas_.end() ? nullptr : &it->second;
}

const SecurityAssociation* KeyStore::find(std::uint16_t spi) const {
  auto it = sas_.find(spi);
  return it == sas_.end() ? nullptr : &it->second;
}

packet::SpacePacket KeyStore::accept(ByteView frame) {
  parse_frame(frame);
  auto* sa = find(frame_spi(frame));
  if (sa == nullptr) throw Error(Errc::UnknownSpi, std::to_string(frame_spi(frame)));
  return sa->accept(frame);
}

std::size_t KeyStore::state_footprint() const noexcept {
  std::size_t total = 0;
  for (const auto& [spi, sa] : sas_) total += sa.state_footprint();
  return total;
}

std::map<std::uint16_t, SaParameters> parse_key_config(std::string_view text) {
  const auto cfg = KeyValueConfig::parse(text);
  std::map<std::uint16_t, SaParameters> out;
  for (const auto& [key, value] : cfg.entries()) {
    if (key.rfind("sa.", 0) != 0) continue;
    const auto dot = key.find('.', 3);
    if (dot == std::string::npos) throw Error(Errc::InvalidConfig, "bad key " + key);
    int spi = 0;
    try {
      spi = std::stoi(key.substr(3, dot - 3), nullptr, 0);
    } catch (const std::exception&) {
      throw Error(Errc::InvalidConfig, "bad spi in " + key);
    }
    if (spi < 0 || spi > 0xffff) throw Error(Errc::InvalidConfig, "spi out of range in " + key);
    auto& params = out[static_cast<std::uint16_t>(spi)];
    params.spi = static_cast<std::uint16_t>(spi);
    const auto field = key.substr(dot + 1);
    if (field == "key") {
      params.key = array_from_hex<crypto::kAeadKeySize>(value);
    } else if (field == "iv") {
      params.iv_base = array_from_hex<4>(value);
    } else if (field == "algorithm") {
      params.algorithm = crypto::parse_aead_algorithm(value);
    } else {
      throw Error(Errc::InvalidConfig, "unknown SA field " + key);
    }
  }
  return out;
}

std::map<std::uint16_t, SaParameters> load_key_file(const std::string& path) {
  const auto cfg = KeyValueConfig::load(path);
  std::string text;
  for (const auto& [k, v] : cfg.entries()) text += k + " = " + v + "\n";
  return parse_key_config(text);
}

}  // namespace spacelink::sdls
