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

#include <deque>
#include <map>
#include <optional>
#include <variant>

#include "spacelink/crypto/asymmetric.hpp"
#include "spacelink/quic/congestion.hpp"
#include "spacelink/quic/handshake.hpp"
#include "spacelink/quic/packet_protection.hpp"
#include "spacelink/quic/recovery.hpp"
#include "spacelink/quic/stream.hpp"

namespace spacelink::quic {

struct SessionConfig {
  crypto::AeadAlgorithm algorithm = crypto::AeadAlgorithm::Aes256Gcm;
  Micros initial_rtt = 100_ms;
  Micros max_ack_delay = 25_ms;
  std::size_t ack_eliciting_threshold = 2;
  std::size_t max_undecryptable = 8;
  std::size_t max_queued_datagrams = 256;
};

struct SessionStats {
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_received = 0;
  std::uint64_t bytes_sent = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t auth_failures = 0;
  std::uint64_t malformed = 0;
  std::uint64_t unknown_conn_id = 0;
  std::uint64_t undecryptable_buffered = 0;
  std::uint64_t undecryptable_dropped = 0;
  std::uint64_t packets_lost = 0;
  std::uint64_t frames_retransmitted = 0;
  std::uint64_t stream_bytes_retransmitted = 0;
  std::uint64_t datagrams_lost = 0;
  std::uint64_t datagrams_dropped = 0;
  std::uint64_t pto_count = 0;
  std::uint64_t handshake_retransmits = 0;
  std::uint64_t early_data_replayed = 0;
  std::uint64_t tickets_rejected = 0;
};

struct StreamDataEvent {
  std::uint32_t stream_id = 0;
  Bytes data;
  bool fin = false;
};
struct DatagramEvent {
  Bytes data;
};
struct EstablishedEvent {
  bool early_data_accepted = false;
};
struct ClosedEvent {
  std::uint16_t code = 0;
  std::string reason;
  bool by_peer = false;
};
using SessionEvent = std::variant<StreamDataEvent, DatagramEvent, EstablishedEvent, ClosedEvent>;

struct UnprotectedPacket {
  std::uint64_t pn = 0;
  bool duplicate = false;
  bool zero_rtt = false;
  std::vector<Frame> frames;
};

/// One end of a secure transport connection.
///
/// The session is sans-IO: datagrams go in through on_datagram, come out of
/// poll_transmit, and time is whatever the caller passes in. on_datagram
/// never throws on peer input; failures are counted in stats().
class Session {
 public:
  /// `pinned_server_key` authenticates the server's signature. A ticket from
  /// an earlier connection enables 0-RTT.
  static Session client(const SessionConfig& config, const crypto::Ed25519PublicKey& pinned_server_key,
                        RandomSource& rng, std::optional<ResumptionTicket> ticket = std::nullopt);
  /// `identity` and `tickets` must outlive the session.
  static Session server(const SessionConfig& config, const crypto::Ed25519Identity& identity, TicketStore& tickets,
                        RandomSource& rng);

  Role role() const noexcept { return role_; }
  State state() const noexcept { return state_; }
  const ConnectionId& conn_id() const noexcept { return conn_id_; }
  const SessionConfig& config() const noexcept { return config_; }

  // Handshake.

  /// Client, Initial state: returns the first flight and enters Handshaking.
  /// Throws WrongState otherwise.
  Bytes client_hello(Micros now);
  /// Server, Initial state: answers a ClientHello and becomes Established.
  /// Throws WrongState or MalformedHello.
  Bytes server_respond(const ConnectionId& conn_id, const ClientHello& hello, Micros now);

  bool early_data_enabled() const noexcept { return early_offered_; }
  bool early_data_accepted() const noexcept { return early_accepted_; }
  std::optional<Micros> established_at() const noexcept { return established_at_; }
  /// The ticket the server issued during this handshake (client side).
  const std::optional<ResumptionTicket>& issued_ticket() const noexcept { return issued_ticket_; }
  /// 1-RTT keys, once derived.
  const std::optional<DirectionalKeys>& application_keys() const noexcept { return app_keys_; }

  // Application data.

  /// Queues bytes on a stream. Throws StreamFinished or NotEstablished (closed).
  void send_stream(std::uint32_t stream_id, ByteView data, bool fin = false);
  /// Queues an unreliable datagram. Throws DatagramTooLarge or NotEstablished (closed).
  void send_datagram(ByteView data);
  std::optional<SessionEvent> poll_event();

  // I/O.

  void on_datagram(ByteView datagram, Micros now);
  std::optional<Bytes> poll_transmit(Micros now);
  Micros next_timeout() const;
  void on_timeout(Micros now);
  /// Locally closes; a CONNECTION_CLOSE is emitted by the next poll_transmit.
  void close(std::uint16_t code, std::string reason);

  // Packet-level operations, exposed for testing.

  /// Needs 1-RTT keys, or 0-RTT keys on a client still handshaking.
  /// Throws NotEstablished, Oversize or PacketNumberExhausted.
  Bytes protect(std::span<const Frame> frames, Micros now);
  /// Throws UnknownConnId, NotEstablished (no keys yet), AuthFail,
  /// UnknownFrameType or MalformedFrame.
  UnprotectedPacket unprotect(ByteView datagram, Micros now);
  /// Throws MalformedAck.
  AckOutcome on_ack(const AckFrame& ack, Micros now);

  // Introspection.

  const SessionStats& stats() const noexcept { return stats_; }
  const RttEstimator& rtt() const noexcept { return recovery_.rtt(); }
  const NewReno& congestion() const noexcept { return cc_; }
  const LossRecovery& recovery() const noexcept { return recovery_; }
  std::uint64_t next_packet_number() const noexcept { return next_pn_; }
  std::optional<std::uint64_t> largest_acked() const noexcept { return recovery_.largest_acked(); }
  /// Bytes queued for sending on streams, including retransmissions.
  std::size_t pending_stream_bytes() const noexcept;
  bool has_pending_send() const noexcept;
  /// Serialized size of all mutable connection state.
  std::size_t state_footprint() const;

 private:
  Session(const SessionConfig& config, Role role, RandomSource& rng);

  bool can_send_application() const noexcept;
  bool sending_zero_rtt() const noexcept { return state_ != State::Established && early_send_.has_value(); }
  Bytes seal_initial(std::span<const Frame> frames);
  void queue_client_hello();
  void handle_initial(ByteView datagram, const ParsedHeader& header, Micros now);
  void handle_server_hello(const Bytes& crypto_data, Micros now);
  void become_established(Micros now);
  void process_frames(const UnprotectedPacket& packet, Micros now);
  void handle_lost(std::vector<SentPacket>& lost);
  void requeue_frames(std::vector<Frame>& frames, bool include_datagrams);
  void flush_undecryptable(Micros now);
  void discard_initial_keys();
  void fail(std::uint16_t code, std::string reason);
  std::optional<Micros> pto_deadline() const;
  std::optional<Micros> handshake_deadline() const;
  std::uint64_t take_packet_number();

  SessionConfig config_;
  Role role_;
  State state_ = State::Initial;
  RandomSource* rng_;
  ConnectionId conn_id_{};

  const crypto::Ed25519Identity* identity_ = nullptr;
  TicketStore* tickets_ = nullptr;
  crypto::Ed25519PublicKey pinned_key_{};
  std::optional<ResumptionTicket> resume_ticket_;
  std::optional<ResumptionTicket> issued_ticket_;

  std::optional<crypto::X25519KeyPair> ephemeral_;
  Bytes client_hello_bytes_;
  Bytes server_hello_bytes_;
  ByteArray<32> peer_client_random_{};

  std::optional<PacketProtector> initial_send_;
  std::optional<PacketProtector> initial_recv_;
  std::optional<PacketProtector> early_send_;
  std::optional<PacketProtector> early_recv_;
  std::optional<PacketProtector> app_send_;
  std::optional<PacketProtector> app_recv_;
  std::optional<DirectionalKeys> app_keys_;
  bool early_offered_ = false;
  bool early_accepted_ = false;
  std::optional<Micros> established_at_;

  std::uint64_t next_pn_ = 0;
  std::optional<std::uint64_t> largest_sent_;
  LossRecovery recovery_;
  NewReno cc_;
  ReceivedPackets received_;
  std::uint32_t pto_count_ = 0;
  std::size_t probes_pending_ = 0;
  bool handshake_confirmed_ = false;

  std::uint32_t handshake_count_ = 0;
  std::optional<Micros> hello_sent_at_;
  bool hello_retransmitted_ = false;
  std::deque<Bytes> handshake_out_;

  std::map<std::uint32_t, SendStream> send_streams_;
  std::uint32_t stream_cursor_ = 0;
  std::map<std::uint32_t, RecvStream> recv_streams_;
  std::deque<Frame> retransmit_;
  std::deque<Bytes> datagrams_out_;
  std::deque<SessionEvent> events_;
  std::deque<Bytes> undecryptable_;

  std::optional<ConnectionCloseFrame> close_pending_;
  SessionStats stats_;
};

}  // namespace spacelink::quic
