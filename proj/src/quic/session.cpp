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

#include "spacelink/quic/session.hpp"

#include <algorithm>

#include "spacelink/quic/key_schedule.hpp"

namespace spacelink::quic {

namespace {

Micros backoff(Micros base, std::uint32_t count) { return base * (std::int64_t{1} << std::min<std::uint32_t>(count, 16)); }

bool any_ack_eliciting(std::span<const Frame> frames) {
  return std::any_of(frames.begin(), frames.end(), [](const Frame& f) { return is_ack_eliciting(f); });
}

std::optional<Bytes> crypto_payload(const std::vector<Frame>& frames) {
  for (const auto& f : frames) {
    if (const auto* c = std::get_if<CryptoFrame>(&f); c && c->offset == 0) return c->data;
  }
  return std::nullopt;
}

const ConnectionCloseFrame* find_close(const std::vector<Frame>& frames) {
  for (const auto& f : frames) {
    if (const auto* c = std::get_if<ConnectionCloseFrame>(&f)) return c;
  }
  return nullptr;
}

}  // namespace

Session::Session(const SessionConfig& config, Role role, RandomSource& rng)
    : config_(config),
      role_(role),
      rng_(&rng),
      recovery_(config.initial_rtt, config.max_ack_delay) {}

Session Session::client(const SessionConfig& config, const crypto::Ed25519PublicKey& pinned_server_key,
                        RandomSource& rng, std::optional<ResumptionTicket> ticket) {
  Session s(config, Role::Client, rng);
  s.pinned_key_ = pinned_server_key;
  s.resume_ticket_ = std::move(ticket);
  rng.fill(s.conn_id_);
  const auto keys = derive_initial_keys(s.conn_id_);
  s.initial_send_.emplace(config.algorithm, keys.client);
  s.initial_recv_.emplace(config.algorithm, keys.server);
  return s;
}

Session Session::server(const SessionConfig& config, const crypto::Ed25519Identity& identity, TicketStore& tickets,
                        RandomSource& rng) {
  Session s(config, Role::Server, rng);
  s.identity_ = &identity;
  s.tickets_ = &tickets;
  return s;
}

std::uint64_t Session::take_packet_number() {
  if (next_pn_ > kMaxPacketNumber) throw Error(Errc::PacketNumberExhausted, "packet number space exhausted");
  largest_sent_ = next_pn_;
  return next_pn_++;
}

Bytes Session::seal_initial(std::span<const Frame> frames) {
  auto plaintext = encode_frames(frames);
  if (plaintext.size() < kSampleSize) plaintext.resize(kSampleSize, 0);
  const auto pn = take_packet_number();
  auto out = initial_send_->seal_long(LongType::Initial, conn_id_, pn, plaintext);
  ++stats_.packets_sent;
  stats_.bytes_sent += out.size();
  return out;
}

Bytes Session::client_hello(Micros now) {
  if (role_ != Role::Client || state_ != State::Initial) throw Error(Errc::WrongState, "client_hello");
  ephemeral_ = crypto::X25519KeyPair::generate(*rng_);
  ClientHello ch;
  rng_->fill(ch.random);
  ch.eph_pub = ephemeral_->public_key;
  if (resume_ticket_) ch.ticket = resume_ticket_->identity;
  client_hello_bytes_ = ch.encode();
  if (resume_ticket_) {
    early_send_.emplace(config_.algorithm,
                        derive_early_keys(resume_ticket_->secret, crypto::sha256(client_hello_bytes_)));
    early_offered_ = true;
  }
  state_ = State::Handshaking;
  hello_sent_at_ = now;
  const Frame frame = CryptoFrame{0, client_hello_bytes_};
  return seal_initial(std::span(&frame, 1));
}

Bytes Session::server_respond(const ConnectionId& conn_id, const ClientHello& hello, Micros now) {
  if (role_ != Role::Server || state_ != State::Initial) throw Error(Errc::WrongState, "server_respond");
  auto eph = crypto::X25519KeyPair::generate(*rng_);
  const auto shared = crypto::x25519(eph.secret, hello.eph_pub);
  if (!shared) throw Error(Errc::MalformedHello, "degenerate key share");

  conn_id_ = conn_id;
  const auto initial = derive_initial_keys(conn_id_);
  initial_send_.emplace(config_.algorithm, initial.server);
  initial_recv_.emplace(config_.algorithm, initial.client);

  const auto ch_bytes = hello.encode();
  std::optional<Secret> psk;
  if (!hello.ticket.empty()) {
    psk = tickets_->redeem(hello.ticket);
    if (psk) {
      early_recv_.emplace(config_.algorithm, derive_early_keys(*psk, crypto::sha256(ch_bytes)));
      early_offered_ = true;
      early_accepted_ = true;
    } else {
      ++stats_.tickets_rejected;
    }
  }

  ServerHello sh;
  rng_->fill(sh.random);
  sh.eph_pub = eph.public_key;
  sh.early_data_accepted = early_accepted_;
  sh.ticket = tickets_->new_identity(*rng_);
  const auto transcript = handshake_transcript(ch_bytes, sh.encode_unsigned());
  sh.signature = identity_->sign(transcript);

  const auto secrets = derive_secrets(psk, *shared, transcript);
  tickets_->store(sh.ticket, derive_resumption_secret(secrets.handshake_secret, transcript));
  app_keys_ = secrets.keys;
  app_send_.emplace(config_.algorithm, secrets.keys.server);
  app_recv_.emplace(config_.algorithm, secrets.keys.client);
  crypto::secure_wipe(eph.secret);

  server_hello_bytes_ = sh.encode();
  peer_client_random_ = hello.random;
  const Frame frame = CryptoFrame{0, server_hello_bytes_};
  auto packet = seal_initial(std::span(&frame, 1));
  become_established(now);
  return packet;
}

void Session::become_established(Micros now) {
  state_ = State::Established;
  established_at_ = now;
  events_.push_back(EstablishedEvent{early_accepted_});
}

void Session::handle_initial(ByteView datagram, const ParsedHeader& header, Micros now) {
  if (role_ == Role::Server && state_ == State::Initial) {
    const auto keys = derive_initial_keys(header.conn_id);
    const PacketProtector opener(config_.algorithm, keys.client);
    const auto opened = opener.open_long(datagram);
    if (!opened) {
      ++stats_.auth_failures;
      return;
    }
    ++stats_.packets_received;
    try {
      const auto frames = decode_frames(opened->plaintext);
      const auto payload = crypto_payload(frames);
      if (!payload) throw Error(Errc::MalformedHello, "no ClientHello");
      handshake_out_.push_back(server_respond(header.conn_id, ClientHello::decode(*payload), now));
    } catch (const Error&) {
      ++stats_.malformed;
      return;
    }
    flush_undecryptable(now);
    return;
  }

  if (!initial_recv_) {
    ++stats_.undecryptable_dropped;
    return;
  }
  const auto opened = initial_recv_->open_long(datagram);
  if (!opened) {
    ++stats_.auth_failures;
    return;
  }
  ++stats_.packets_received;
  std::vector<Frame> frames;
  try {
    frames = decode_frames(opened->plaintext);
  } catch (const Error&) {
    ++stats_.malformed;
    return;
  }
  if (const auto* close = find_close(frames)) {
    state_ = State::Closed;
    events_.push_back(ClosedEvent{close->code, close->reason, true});
    return;
  }
  const auto payload = crypto_payload(frames);
  if (!payload) {
    ++stats_.malformed;
    return;
  }

  if (role_ == Role::Server) {
    // Our ServerHello was lost; answer the repeated ClientHello again.
    try {
      const auto ch = ClientHello::decode(*payload);
      if (ch.random != peer_client_random_) {
        ++stats_.malformed;
        return;
      }
    } catch (const Error&) {
      ++stats_.malformed;
      return;
    }
    const Frame frame = CryptoFrame{0, server_hello_bytes_};
    handshake_out_.push_back(seal_initial(std::span(&frame, 1)));
    ++stats_.handshake_retransmits;
    return;
  }

  if (state_ != State::Handshaking) {
    ++stats_.duplicates;
    return;
  }
  handle_server_hello(*payload, now);
}

void Session::handle_server_hello(const Bytes& crypto_data, Micros now) {
  ServerHello sh;
  try {
    sh = ServerHello::decode(crypto_data);
  } catch (const Error& e) {
    fail(kHandshakeFailure, e.what());
    return;
  }
  const auto transcript = handshake_transcript(client_hello_bytes_, sh.encode_unsigned());
  if (!crypto::ed25519_verify(pinned_key_, transcript, sh.signature)) {
    fail(kHandshakeFailure, "server signature rejected");
    return;
  }
  const auto shared = crypto::x25519(ephemeral_->secret, sh.eph_pub);
  if (!shared) {
    fail(kHandshakeFailure, "degenerate key share");
    return;
  }

  early_accepted_ = sh.early_data_accepted && early_offered_;
  std::optional<Secret> psk;
  if (early_accepted_) psk = resume_ticket_->secret;
  const auto secrets = derive_secrets(psk, *shared, transcript);
  app_keys_ = secrets.keys;
  app_send_.emplace(config_.algorithm, secrets.keys.client);
  app_recv_.emplace(config_.algorithm, secrets.keys.server);
  if (!sh.ticket.empty()) {
    issued_ticket_ = ResumptionTicket{sh.ticket, derive_resumption_secret(secrets.handshake_secret, transcript)};
  }

  if (!hello_retransmitted_ && hello_sent_at_) recovery_.on_rtt_sample(now - *hello_sent_at_);

  if (early_offered_ && !early_accepted_) {
    auto refused = recovery_.take_zero_rtt();
    for (auto& p : refused) {
      cc_.on_packet_removed(p.bytes);
      ++stats_.early_data_replayed;
      requeue_frames(p.frames, true);
    }
  }
  early_send_.reset();
  crypto::secure_wipe(ephemeral_->secret);
  ephemeral_.reset();
  client_hello_bytes_.clear();
  client_hello_bytes_.shrink_to_fit();
  resume_ticket_.reset();

  become_established(now);
  flush_undecryptable(now);
}

void Session::requeue_frames(std::vector<Frame>& frames, bool include_datagrams) {
  for (auto& f : frames) {
    if (auto* s = std::get_if<StreamFrame>(&f)) {
      ++stats_.frames_retransmitted;
      stats_.stream_bytes_retransmitted += s->data.size();
      retransmit_.push_back(std::move(f));
    } else if (std::holds_alternative<CryptoFrame>(f)) {
      ++stats_.frames_retransmitted;
      retransmit_.push_back(std::move(f));
    } else if (auto* d = std::get_if<DatagramFrame>(&f)) {
      if (include_datagrams) {
        datagrams_out_.push_back(std::move(d->data));
      } else {
        ++stats_.datagrams_lost;
      }
    }
  }
}

void Session::handle_lost(std::vector<SentPacket>& lost) {
  if (lost.empty()) return;
  std::uint64_t largest_lost = 0;
  for (auto& p : lost) {
    if (p.in_flight) cc_.on_packet_removed(p.bytes);
    ++stats_.packets_lost;
    largest_lost = std::max(largest_lost, p.pn);
    auto frames = p.frames;
    requeue_frames(frames, false);
  }
  cc_.on_event(NewReno::LossEvent{largest_lost, largest_sent_.value_or(0)});
}

AckOutcome Session::on_ack(const AckFrame& ack, Micros now) {
  auto out = recovery_.on_ack(ack, now, largest_sent_);
  handle_lost(out.lost);
  bool confirms = false;
  for (const auto& p : out.newly_acked) {
    if (p.in_flight) {
      cc_.on_packet_removed(p.bytes);
      cc_.on_event(NewReno::Acked{p.bytes, p.pn});
    }
    if (!p.zero_rtt) confirms = true;
  }
  if (!out.newly_acked.empty()) pto_count_ = 0;
  if (confirms && role_ == Role::Client && !handshake_confirmed_) discard_initial_keys();
  return out;
}

void Session::discard_initial_keys() {
  handshake_confirmed_ = true;
  initial_send_.reset();
  initial_recv_.reset();
  server_hello_bytes_.clear();
  server_hello_bytes_.shrink_to_fit();
}

void Session::fail(std::uint16_t code, std::string reason) {
  state_ = State::Closed;
  events_.push_back(ClosedEvent{code, reason, false});
  close_pending_ = ConnectionCloseFrame{code, std::move(reason)};
}

void Session::close(std::uint16_t code, std::string reason) {
  if (state_ == State::Closed) return;
  fail(code, std::move(reason));
}

void Session::send_stream(std::uint32_t stream_id, ByteView data, bool fin) {
  if (state_ == State::Closed) throw Error(Errc::NotEstablished, "connection closed");
  send_streams_.try_emplace(stream_id, stream_id).first->second.write(data, fin);
}

void Session::send_datagram(ByteView data) {
  if (data.size() > kMaxDatagramData) throw Error(Errc::DatagramTooLarge, std::to_string(data.size()) + " bytes");
  if (state_ == State::Closed) throw Error(Errc::NotEstablished, "connection closed");
  if (datagrams_out_.size() >= config_.max_queued_datagrams) {
    datagrams_out_.pop_front();
    ++stats_.datagrams_dropped;
  }
  datagrams_out_.emplace_back(data.begin(), data.end());
}

std::optional<SessionEvent> Session::poll_event() {
  if (events_.empty()) return std::nullopt;
  auto e = std::move(events_.front());
  events_.pop_front();
  return e;
}

void Session::flush_undecryptable(Micros now) {
  auto pending = std::move(undecryptable_);
  undecryptable_.clear();
  for (const auto& d : pending) on_datagram(d, now);
}

void Session::on_datagram(ByteView datagram, Micros now) {
  if (state_ == State::Closed) return;
  ParsedHeader header;
  try {
    header = parse_header(datagram);
  } catch (const Error&) {
    ++stats_.malformed;
    return;
  }
  const bool unbound = role_ == Role::Server && state_ == State::Initial;
  if (!unbound && header.conn_id != conn_id_) {
    ++stats_.unknown_conn_id;
    return;
  }
  if (header.long_form && header.long_type == LongType::Initial) {
    handle_initial(datagram, header, now);
    return;
  }
  try {
    const auto packet = unprotect(datagram, now);
    if (!packet.duplicate) process_frames(packet, now);
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::NotEstablished:
        if ((state_ == State::Initial || state_ == State::Handshaking) &&
            undecryptable_.size() < config_.max_undecryptable) {
          undecryptable_.emplace_back(datagram.begin(), datagram.end());
          ++stats_.undecryptable_buffered;
        } else {
          ++stats_.undecryptable_dropped;
        }
        break;
      case Errc::AuthFail:
        ++stats_.auth_failures;
        break;
      case Errc::UnknownConnId:
        ++stats_.unknown_conn_id;
        break;
      case Errc::UnknownFrameType:
      case Errc::MalformedFrame:
        ++stats_.malformed;
        fail(kFrameEncodingError, e.what());
        break;
      case Errc::MalformedAck:
        ++stats_.malformed;
        fail(kProtocolViolation, e.what());
        break;
      default:
        ++stats_.malformed;
        break;
    }
  }
}

UnprotectedPacket Session::unprotect(ByteView datagram, Micros now) {
  const auto header = parse_header(datagram);
  const bool unbound = role_ == Role::Server && state_ == State::Initial;
  if (!unbound && header.conn_id != conn_id_) throw Error(Errc::UnknownConnId, to_hex(header.conn_id));

  const PacketProtector* opener = nullptr;
  UnprotectedPacket out;
  if (!header.long_form) {
    if (app_recv_) opener = &*app_recv_;
  } else if (header.long_type == LongType::ZeroRtt) {
    if (role_ != Role::Server) throw Error(Errc::MalformedFrame, "0-RTT packet sent to client");
    out.zero_rtt = true;
    if (early_recv_) opener = &*early_recv_;
  } else {
    throw Error(Errc::MalformedFrame, "Initial packet outside the handshake");
  }
  if (!opener) throw Error(Errc::NotEstablished, "no keys for packet");

  auto opened = header.long_form ? opener->open_long(datagram) : opener->open_short(datagram);
  if (!opened) throw Error(Errc::AuthFail, "packet authentication failed");
  ++stats_.packets_received;
  out.pn = opened->pn;
  if (received_.contains(out.pn)) {
    ++stats_.duplicates;
    out.duplicate = true;
    return out;
  }
  out.frames = decode_frames(opened->plaintext);
  received_.insert(out.pn, any_ack_eliciting(out.frames), now, config_.max_ack_delay);
  if (role_ == Role::Server && !header.long_form && !handshake_confirmed_) discard_initial_keys();
  return out;
}

void Session::process_frames(const UnprotectedPacket& packet, Micros now) {
  for (const auto& frame : packet.frames) {
    if (state_ == State::Closed) return;
    if (const auto* ack = std::get_if<AckFrame>(&frame)) {
      on_ack(*ack, now);
    } else if (const auto* s = std::get_if<StreamFrame>(&frame)) {
      auto delivery = recv_streams_[s->stream_id].on_frame(*s);
      if (!delivery.data.empty() || delivery.fin) {
        events_.push_back(StreamDataEvent{s->stream_id, std::move(delivery.data), delivery.fin});
      }
    } else if (const auto* d = std::get_if<DatagramFrame>(&frame)) {
      events_.push_back(DatagramEvent{d->data});
    } else if (const auto* c = std::get_if<ConnectionCloseFrame>(&frame)) {
      state_ = State::Closed;
      close_pending_.reset();
      events_.push_back(ClosedEvent{c->code, c->reason, true});
      return;
    }
  }
}

bool Session::can_send_application() const noexcept {
  return (state_ == State::Established && app_send_) || sending_zero_rtt();
}

Bytes Session::protect(std::span<const Frame> frames, Micros now) {
  const PacketProtector* sealer = nullptr;
  const bool zero_rtt = state_ != State::Established;
  if (state_ == State::Established && app_send_) {
    sealer = &*app_send_;
  } else if (state_ == State::Handshaking && early_send_) {
    sealer = &*early_send_;
  } else {
    throw Error(Errc::NotEstablished, "no send keys");
  }
  std::size_t plain_size = 0;
  for (const auto& f : frames) plain_size += encoded_size(f);
  const auto header = zero_rtt ? kLongHeaderSize : kShortHeaderSize;
  if (plain_size + header + kTagSize > kMss) throw Error(Errc::Oversize, std::to_string(plain_size) + " byte payload");

  auto plaintext = encode_frames(frames);
  if (plaintext.size() < kSampleSize) plaintext.resize(kSampleSize, 0);
  const auto pn = take_packet_number();
  auto out = zero_rtt ? sealer->seal_long(LongType::ZeroRtt, conn_id_, pn, plaintext)
                      : sealer->seal_short(conn_id_, pn, plaintext);
  ++stats_.packets_sent;
  stats_.bytes_sent += out.size();

  if (any_ack_eliciting(frames)) {
    SentPacket sent;
    sent.pn = pn;
    sent.bytes = out.size();
    sent.time_sent = now;
    sent.zero_rtt = zero_rtt;
    for (const auto& f : frames) {
      if (is_retransmittable(f)) {
        sent.frames.push_back(f);
      } else if (std::holds_alternative<DatagramFrame>(f)) {
        // Early datagrams are replayed if 0-RTT is refused; others are only counted.
        sent.frames.push_back(zero_rtt ? f : Frame{DatagramFrame{}});
      }
    }
    cc_.on_packet_sent(out.size());
    recovery_.on_packet_sent(std::move(sent));
  }
  return out;
}

bool Session::has_pending_send() const noexcept {
  if (!handshake_out_.empty() || close_pending_ || !retransmit_.empty() || !datagrams_out_.empty()) return true;
  return std::any_of(send_streams_.begin(), send_streams_.end(), [](const auto& kv) { return kv.second.has_pending(); });
}

std::size_t Session::pending_stream_bytes() const noexcept {
  std::size_t total = 0;
  for (const auto& [id, s] : send_streams_) total += s.pending_bytes();
  for (const auto& f : retransmit_) {
    if (const auto* s = std::get_if<StreamFrame>(&f)) total += s->data.size();
  }
  return total;
}

std::optional<Bytes> Session::poll_transmit(Micros now) {
  if (state_ == State::Closed) {
    if (!close_pending_) return std::nullopt;
    const Frame frame = *close_pending_;
    close_pending_.reset();
    if (app_send_) {
      auto plaintext = encode_frames(std::span(&frame, 1));
      if (plaintext.size() < kSampleSize) plaintext.resize(kSampleSize, 0);
      auto out = app_send_->seal_short(conn_id_, take_packet_number(), plaintext);
      ++stats_.packets_sent;
      stats_.bytes_sent += out.size();
      return out;
    }
    if (initial_send_) return seal_initial(std::span(&frame, 1));
    return std::nullopt;
  }
  if (!handshake_out_.empty()) {
    auto out = std::move(handshake_out_.front());
    handshake_out_.pop_front();
    return out;
  }
  if (!can_send_application()) return std::nullopt;

  const bool zero_rtt = sending_zero_rtt();
  const std::size_t header = zero_rtt ? kLongHeaderSize : kShortHeaderSize;
  const std::size_t max_plain = kMss - header - kTagSize - 1;  // one byte kept for a probe PING
  const bool probe = probes_pending_ > 0;
  const bool want_data = probe || has_pending_send();

  std::vector<Frame> frames;
  std::size_t used = 0;
  bool ack_included = false;
  if (!zero_rtt && (received_.ack_needed(now, config_.ack_eliciting_threshold) ||
                    (want_data && received_.has_unacked()))) {
    auto ack = received_.make_ack(now);
    used += encoded_size(ack);
    frames.emplace_back(std::move(ack));
    ack_included = true;
  }

  std::size_t budget = max_plain - used;
  if (!probe) {
    // Whole packet, padding included, must fit in the congestion window.
    const auto avail = cc_.available();
    const auto overhead = header + kTagSize + used;
    const auto room = avail > overhead ? avail - overhead : 0;
    budget = room + used < kSampleSize ? 0 : std::min(budget, room);
  }

  while (!retransmit_.empty() && budget > 0) {
    auto& f = retransmit_.front();
    const auto size = encoded_size(f);
    if (size <= budget) {
      budget -= size;
      frames.push_back(std::move(f));
      retransmit_.pop_front();
      continue;
    }
    auto* s = std::get_if<StreamFrame>(&f);
    if (s && budget > kStreamFrameOverhead) {
      const auto take = budget - kStreamFrameOverhead;
      StreamFrame head{s->stream_id, s->offset, false, Bytes(s->data.begin(), s->data.begin() + static_cast<std::ptrdiff_t>(take))};
      s->data.erase(s->data.begin(), s->data.begin() + static_cast<std::ptrdiff_t>(take));
      s->offset += take;
      budget = 0;
      frames.emplace_back(std::move(head));
    }
    break;
  }
  while (!datagrams_out_.empty() && kDatagramFrameOverhead + datagrams_out_.front().size() <= budget) {
    budget -= kDatagramFrameOverhead + datagrams_out_.front().size();
    frames.emplace_back(DatagramFrame{std::move(datagrams_out_.front())});
    datagrams_out_.pop_front();
  }
  if (!send_streams_.empty() && budget >= kStreamFrameOverhead) {
    auto it = send_streams_.lower_bound(stream_cursor_);
    for (std::size_t visited = 0; visited < send_streams_.size() && budget >= kStreamFrameOverhead; ++visited) {
      if (it == send_streams_.end()) it = send_streams_.begin();
      while (auto f = it->second.next_frame(budget)) {
        budget -= encoded_size(*f);
        frames.emplace_back(std::move(*f));
        stream_cursor_ = it->first + 1;
      }
      ++it;
    }
  }

  bool eliciting = any_ack_eliciting(frames);
  if (probe && !eliciting) {
    frames.emplace_back(PingFrame{});
    eliciting = true;
  }
  if (frames.empty()) return std::nullopt;

  auto out = protect(frames, now);
  if (ack_included) received_.on_ack_sent();
  if (probe) --probes_pending_;
  return out;
}

std::optional<Micros> Session::pto_deadline() const {
  const auto last = recovery_.last_ack_eliciting_sent();
  if (!last || !recovery_.has_ack_eliciting_in_flight()) return std::nullopt;
  return *last + backoff(recovery_.rtt().pto_base(config_.max_ack_delay), pto_count_);
}

std::optional<Micros> Session::handshake_deadline() const {
  if (role_ != Role::Client || state_ != State::Handshaking || !hello_sent_at_) return std::nullopt;
  return *hello_sent_at_ + backoff(recovery_.rtt().pto_base(config_.max_ack_delay), handshake_count_);
}

Micros Session::next_timeout() const {
  if (state_ == State::Closed) return kNever;
  Micros t = kNever;
  if (const auto d = received_.ack_deadline(); d && state_ == State::Established) t = std::min(t, *d);
  if (const auto l = recovery_.loss_time()) t = std::min(t, *l);
  if (const auto p = pto_deadline()) t = std::min(t, *p);
  if (const auto h = handshake_deadline()) t = std::min(t, *h);
  return t;
}

void Session::on_timeout(Micros now) {
  if (state_ == State::Closed) return;
  if (const auto h = handshake_deadline(); h && now >= *h) {
    const Frame frame = CryptoFrame{0, client_hello_bytes_};
    handshake_out_.push_back(seal_initial(std::span(&frame, 1)));
    ++handshake_count_;
    ++stats_.handshake_retransmits;
    hello_sent_at_ = now;
    hello_retransmitted_ = true;
  }
  if (const auto l = recovery_.loss_time(); l && now >= *l) {
    auto lost = recovery_.on_loss_timeout(now);
    handle_lost(lost);
  }
  if (const auto p = pto_deadline(); p && now >= *p) {
    ++pto_count_;
    ++stats_.pto_count;
    probes_pending_ = 1;
    cc_.on_event(NewReno::PtoFired{});
  }
}

std::size_t Session::state_footprint() const {
  std::size_t n = kConnectionIdSize + 1 + 1 + 8 + 8 + 4;  // conn id, role, state, next pn, largest sent, pto count
  n += RttEstimator::kSerializedSize + NewReno::kSerializedSize;
  for (const auto* p : {&initial_send_, &initial_recv_, &early_send_, &early_recv_, &app_send_, &app_recv_}) {
    if (p->has_value()) n += PacketKeys::kSerializedSize;
  }
  if (ephemeral_) n += 64;
  n += client_hello_bytes_.size() + server_hello_bytes_.size();
  if (!server_hello_bytes_.empty()) n += peer_client_random_.size();
  n += identity_ ? 64 : pinned_key_.size();
  if (resume_ticket_) n += resume_ticket_->identity.size() + 32;
  if (issued_ticket_) n += issued_ticket_->identity.size() + 32;
  n += recovery_.ledger_footprint() + received_.footprint();
  for (const auto& [id, s] : send_streams_) n += s.footprint();
  for (const auto& [id, r] : recv_streams_) n += r.footprint();
  for (const auto& f : retransmit_) n += encoded_size(f);
  for (const auto& d : datagrams_out_) n += 2 + d.size();
  for (const auto& b : handshake_out_) n += b.size();
  for (const auto& b : undecryptable_) n += b.size();
  for (const auto& e : events_) {
    if (const auto* s = std::get_if<StreamDataEvent>(&e)) n += 4 + s->data.size();
    if (const auto* d = std::get_if<DatagramEvent>(&e)) n += d->data.size();
  }
  return n;
}

}  // namespace spacelink::quic
