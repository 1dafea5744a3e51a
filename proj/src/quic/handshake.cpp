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

#include "spacelink/quic/handshake.hpp"

#include <algorithm>

namespace spacelink::quic {

namespace {

template <typename Fn>
auto malformed_on_truncation(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::Truncated) throw Error(Errc::MalformedHello, "truncated hello");
    throw;
  }
}

}  // namespace

Bytes ClientHello::encode() const {
  Bytes out;
  ByteWriter w(out);
  w.bytes(random);
  w.bytes(eph_pub);
  w.u16(static_cast<std::uint16_t>(ticket.size()));
  w.bytes(ticket);
  return out;
}

ClientHello ClientHello::decode(ByteView data) {
  return malformed_on_truncation([&] {
    ByteReader r(data);
    ClientHello ch;
    ch.random = r.array<32>();
    ch.eph_pub = r.array<32>();
    const auto len = r.u16();
    const auto t = r.take(len);
    ch.ticket.assign(t.begin(), t.end());
    if (!r.empty()) throw Error(Errc::MalformedHello, "trailing bytes in ClientHello");
    return ch;
  });
}

Bytes ServerHello::encode() const {
  Bytes out;
  ByteWriter w(out);
  w.bytes(random);
  w.bytes(eph_pub);
  w.u8(early_data_accepted ? 1 : 0);
  w.u16(static_cast<std::uint16_t>(signature.size()));
  w.bytes(signature);
  w.u16(static_cast<std::uint16_t>(ticket.size()));
  w.bytes(ticket);
  return out;
}

Bytes ServerHello::encode_unsigned() const {
  Bytes out;
  ByteWriter w(out);
  w.bytes(random);
  w.bytes(eph_pub);
  w.u8(early_data_accepted ? 1 : 0);
  w.u16(static_cast<std::uint16_t>(ticket.size()));
  w.bytes(ticket);
  return out;
}

ServerHello ServerHello::decode(ByteView data) {
  return malformed_on_truncation([&] {
    ByteReader r(data);
    ServerHello sh;
    sh.random = r.array<32>();
    sh.eph_pub = r.array<32>();
    const auto flags = r.u8();
    if (flags & ~1u) throw Error(Errc::MalformedHello, "unknown ServerHello flags");
    sh.early_data_accepted = flags & 1u;
    if (r.u16() != sh.signature.size()) throw Error(Errc::MalformedHello, "bad signature length");
    sh.signature = r.array<64>();
    const auto len = r.u16();
    const auto t = r.take(len);
    sh.ticket.assign(t.begin(), t.end());
    if (!r.empty()) throw Error(Errc::MalformedHello, "trailing bytes in ServerHello");
    return sh;
  });
}

crypto::Sha256Digest handshake_transcript(ByteView client_hello, ByteView server_hello_unsigned) {
  crypto::Sha256 h;
  h.update(client_hello).update(server_hello_unsigned);
  return h.finish();
}

Bytes TicketStore::new_identity(RandomSource& rng) const {
  Bytes id(kTicketIdentitySize);
  rng.fill(id);
  return id;
}

void TicketStore::store(ByteView identity, const Secret& secret) {
  if (capacity_ == 0) return;
  while (tickets_.size() >= capacity_) {
    auto oldest = std::min_element(tickets_.begin(), tickets_.end(),
                                   [](const auto& a, const auto& b) { return a.second.first < b.second.first; });
    tickets_.erase(oldest);
  }
  tickets_.insert_or_assign(Bytes(identity.begin(), identity.end()), std::make_pair(counter_++, secret));
}

std::optional<Secret> TicketStore::redeem(ByteView identity) {
  auto it = tickets_.find(Bytes(identity.begin(), identity.end()));
  if (it == tickets_.end()) return std::nullopt;
  auto secret = it->second.second;
  tickets_.erase(it);
  return secret;
}

}  // namespace spacelink::quic
