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

#include "spacelink/endpoints/link.hpp"

namespace spacelink::endpoints {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::None: return "none";
    case Mode::Sdls: return "sdls";
    case Mode::Quic: return "quic";
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  if (text == "none") return Mode::None;
  if (text == "sdls") return Mode::Sdls;
  if (text == "quic") return Mode::Quic;
  throw Error(Errc::InvalidConfig, "unknown mode '" + std::string(text) + "'");
}

std::string label(const SecurityMode& mode) {
  if (mode.mode == Mode::None) return "none";
  return to_string(mode.mode) + "-" + std::string(crypto::to_string(mode.backend));
}

void PlainLink::send_packet(const packet::SpacePacket& p, Micros) {
  out_.push_back(packet::encode(p));
  ++stats_.packets_sent;
}

void PlainLink::on_datagram(ByteView datagram, Micros) {
  try {
    in_.emplace_back(packet::decode(datagram));
    ++stats_.packets_received;
  } catch (const Error& e) {
    in_.emplace_back(LinkFault{e.code()});
    ++stats_.faults;
  }
}

std::optional<LinkInput> PlainLink::poll_input() {
  if (in_.empty()) return std::nullopt;
  auto v = std::move(in_.front());
  in_.pop_front();
  return v;
}

std::optional<Bytes> PlainLink::poll_transmit(Micros) {
  if (out_.empty()) return std::nullopt;
  auto v = std::move(out_.front());
  out_.pop_front();
  return v;
}

SdlsLink::SdlsLink(const sdls::SaParameters& params, sdls::SaRole role) : tx_spi_(params.spi) {
  keys_.add(sdls::SecurityAssociation(params, role));
}

void SdlsLink::send_packet(const packet::SpacePacket& p, Micros) {
  try {
    out_.push_back(keys_.find(tx_spi_)->apply(p));
    ++stats_.packets_sent;
  } catch (const Error&) {
    ++stats_.send_dropped;
  }
}

void SdlsLink::on_datagram(ByteView datagram, Micros) {
  try {
    in_.emplace_back(keys_.accept(datagram));
    ++stats_.packets_received;
  } catch (const Error& e) {
    in_.emplace_back(LinkFault{e.code()});
    ++stats_.faults;
  }
}

std::optional<LinkInput> SdlsLink::poll_input() {
  if (in_.empty()) return std::nullopt;
  auto v = std::move(in_.front());
  in_.pop_front();
  return v;
}

std::optional<Bytes> SdlsLink::poll_transmit(Micros) {
  if (out_.empty()) return std::nullopt;
  auto v = std::move(out_.front());
  out_.pop_front();
  return v;
}

std::size_t SdlsLink::state_footprint() const {
  std::size_t n = keys_.state_footprint();
  for (const auto& f : out_) n += f.size();
  return n;
}

namespace {

std::uint64_t fault_count(const quic::SessionStats& s) {
  return s.auth_failures + s.malformed + s.unknown_conn_id + s.undecryptable_dropped;
}

}  // namespace

void QuicLinkBase::send_on(std::uint32_t stream, const packet::SpacePacket& p) {
  if (!session_ || session_->state() == quic::State::Closed) {
    ++stats_.send_dropped;
    return;
  }
  auto bytes = packet::encode(p);
  if (bytes.size() <= quic::kMaxDatagramData && stream != kCommandStream) {
    session_->send_datagram(bytes);
    ++stats_.via_datagram;
  } else {
    session_->send_stream(stream, bytes);
    ++stats_.via_stream;
  }
  ++stats_.packets_sent;
}

void QuicLinkBase::feed(ByteView datagram, Micros now) {
  const auto before = fault_count(session_->stats());
  session_->on_datagram(datagram, now);
  const auto after = fault_count(session_->stats());
  for (auto i = before; i < after; ++i) {
    in_.emplace_back(LinkFault{Errc::AuthFail});
    ++stats_.faults;
  }
  drain_events();
}

void QuicLinkBase::drain_events() {
  while (auto event = session_->poll_event()) {
    if (auto* data = std::get_if<quic::StreamDataEvent>(&*event)) {
      auto& deframer = deframers_[data->stream_id];
      deframer.push(data->data);
      while (true) {
        try {
          auto p = deframer.next();
          if (!p) break;
          in_.emplace_back(std::move(*p));
          ++stats_.packets_received;
        } catch (const Error& e) {
          in_.emplace_back(LinkFault{e.code()});
          ++stats_.faults;
          break;
        }
      }
    } else if (auto* dg = std::get_if<quic::DatagramEvent>(&*event)) {
      try {
        in_.emplace_back(packet::decode(dg->data));
        ++stats_.packets_received;
      } catch (const Error& e) {
        in_.emplace_back(LinkFault{e.code()});
        ++stats_.faults;
      }
    }
  }
}

std::optional<LinkInput> QuicLinkBase::poll_input() {
  if (in_.empty()) return std::nullopt;
  auto v = std::move(in_.front());
  in_.pop_front();
  return v;
}

std::optional<Bytes> QuicLinkBase::poll_transmit(Micros now) {
  if (!session_) return std::nullopt;
  return session_->poll_transmit(now);
}

Micros QuicLinkBase::next_timeout() const { return session_ ? session_->next_timeout() : kNever; }

void QuicLinkBase::on_timeout(Micros now) {
  if (session_) session_->on_timeout(now);
}

bool QuicLinkBase::ready() const {
  if (!session_) return false;
  return session_->state() == quic::State::Established ||
         (session_->state() == quic::State::Handshaking && session_->early_data_enabled());
}

std::size_t QuicLinkBase::buffer_footprint() const {
  std::size_t n = 0;
  for (const auto& [id, d] : deframers_) n += d.buffered();
  return n;
}

QuicServerLink::QuicServerLink(const quic::SessionConfig& config, crypto::Ed25519Identity identity, RandomSource& rng)
    : config_(config), identity_(std::make_unique<crypto::Ed25519Identity>(std::move(identity))), rng_(&rng) {}

void QuicServerLink::send_packet(const packet::SpacePacket& p, Micros) {
  if (!session_ || session_->state() != quic::State::Established) {
    ++stats_.send_dropped;
    return;
  }
  send_on(kTelemetryStream, p);
}

void QuicServerLink::on_datagram(ByteView datagram, Micros now) {
  bool fresh_hello = false;
  try {
    const auto h = quic::parse_header(datagram);
    fresh_hello = h.long_form && h.long_type == quic::LongType::Initial &&
                  (!session_ || (session_->state() == quic::State::Closed || h.conn_id != session_->conn_id()));
  } catch (const Error&) {
  }
  if (fresh_hello) {
    // A new ClientHello replaces the connection only if it completes a handshake.
    auto candidate = quic::Session::server(config_, *identity_, tickets_, *rng_);
    candidate.on_datagram(datagram, now);
    if (candidate.state() == quic::State::Established) {
      session_ = std::move(candidate);
      deframers_.clear();
      drain_events();
      return;
    }
    in_.emplace_back(LinkFault{Errc::HandshakeFailed});
    ++stats_.faults;
    return;
  }
  if (!session_) {
    in_.emplace_back(LinkFault{Errc::NotEstablished});
    ++stats_.faults;
    return;
  }
  feed(datagram, now);
}

std::size_t QuicServerLink::state_footprint() const {
  std::size_t n = tickets_.footprint() + buffer_footprint();
  if (session_) n += session_->state_footprint();
  return n;
}

QuicClientLink::QuicClientLink(const quic::SessionConfig& config, const crypto::Ed25519PublicKey& server_key,
                               RandomSource& rng, std::optional<quic::ResumptionTicket> ticket) {
  session_ = quic::Session::client(config, server_key, rng, std::move(ticket));
}

void QuicClientLink::connect(Micros now) { hello_.push_back(session_->client_hello(now)); }

void QuicClientLink::send_packet(const packet::SpacePacket& p, Micros) {
  if (!ready()) {
    ++stats_.send_dropped;
    return;
  }
  send_on(kCommandStream, p);
}

void QuicClientLink::on_datagram(ByteView datagram, Micros now) { feed(datagram, now); }

std::optional<Bytes> QuicClientLink::poll_transmit(Micros now) {
  if (!hello_.empty()) {
    auto h = std::move(hello_.front());
    hello_.pop_front();
    return h;
  }
  return QuicLinkBase::poll_transmit(now);
}

std::size_t QuicClientLink::state_footprint() const {
  std::size_t n = buffer_footprint() + session_->state_footprint();
  for (const auto& h : hello_) n += h.size();
  return n;
}

}  // namespace spacelink::endpoints
