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
#include <memory>
#include <optional>
#include <variant>

#include "spacelink/crypto/asymmetric.hpp"
#include "spacelink/packet/space_packet.hpp"
#include "spacelink/quic/session.hpp"
#include "spacelink/sdls/security_association.hpp"

namespace spacelink::endpoints {

enum class Mode : std::uint8_t { None, Sdls, Quic };

struct SecurityMode {
  Mode mode = Mode::None;
  crypto::AeadAlgorithm backend = crypto::AeadAlgorithm::Aes256Gcm;
  bool operator==(const SecurityMode&) const = default;
};

std::string to_string(Mode mode);
/// "none" | "sdls" | "quic"; throws InvalidConfig.
Mode parse_mode(std::string_view text);
/// e.g. "none", "sdls-gcm", "quic-chacha".
std::string label(const SecurityMode& mode);

/// Quic-mode stream assignment.
inline constexpr std::uint32_t kCommandStream = 0;
inline constexpr std::uint32_t kTelemetryStream = 1;

/// Input the link could not turn into a packet.
struct LinkFault {
  Errc code = Errc::AuthFail;
};
using LinkInput = std::variant<packet::SpacePacket, LinkFault>;

struct LinkStats {
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_received = 0;
  std::uint64_t faults = 0;
  std::uint64_t send_dropped = 0;  // no keys or no connection yet
  std::uint64_t via_stream = 0;
  std::uint64_t via_datagram = 0;
};

/// The per-mode security layer between an app and the radio.
class SecureLink {
 public:
  virtual ~SecureLink() = default;

  virtual Mode mode() const noexcept = 0;
  /// Queues one packet for protection and transmission.
  virtual void send_packet(const packet::SpacePacket& p, Micros now) = 0;
  /// Never throws on peer input.
  virtual void on_datagram(ByteView datagram, Micros now) = 0;
  virtual std::optional<LinkInput> poll_input() = 0;
  virtual std::optional<Bytes> poll_transmit(Micros now) = 0;
  virtual Micros next_timeout() const { return kNever; }
  virtual void on_timeout(Micros) {}
  /// Whether application packets can be sent now.
  virtual bool ready() const { return true; }
  /// Serialized size of security-layer state plus its buffers; zero for None.
  virtual std::size_t state_footprint() const = 0;

  const LinkStats& stats() const noexcept { return stats_; }

 protected:
  LinkStats stats_;
};

/// Cleartext space packets, one per datagram.
class PlainLink final : public SecureLink {
 public:
  Mode mode() const noexcept override { return Mode::None; }
  void send_packet(const packet::SpacePacket& p, Micros now) override;
  void on_datagram(ByteView datagram, Micros now) override;
  std::optional<LinkInput> poll_input() override;
  std::optional<Bytes> poll_transmit(Micros now) override;
  std::size_t state_footprint() const override { return 0; }

 private:
  std::deque<Bytes> out_;
  std::deque<LinkInput> in_;
};

/// SDLS-protected space packets under one bidirectional SA.
class SdlsLink final : public SecureLink {
 public:
  SdlsLink(const sdls::SaParameters& params, sdls::SaRole role);

  Mode mode() const noexcept override { return Mode::Sdls; }
  void send_packet(const packet::SpacePacket& p, Micros now) override;
  void on_datagram(ByteView datagram, Micros now) override;
  std::optional<LinkInput> poll_input() override;
  std::optional<Bytes> poll_transmit(Micros now) override;
  std::size_t state_footprint() const override;

  const sdls::KeyStore& keys() const noexcept { return keys_; }

 private:
  sdls::KeyStore keys_;
  std::uint16_t tx_spi_;
  std::deque<Bytes> out_;
  std::deque<LinkInput> in_;
};

/// Shared between the two quic adapters: turns session events into packets.
class QuicLinkBase : public SecureLink {
 public:
  Mode mode() const noexcept override { return Mode::Quic; }
  std::optional<LinkInput> poll_input() override;
  std::optional<Bytes> poll_transmit(Micros now) override;
  Micros next_timeout() const override;
  void on_timeout(Micros now) override;
  bool ready() const override;

  quic::Session* session() noexcept { return session_ ? &*session_ : nullptr; }
  const quic::Session* session() const noexcept { return session_ ? &*session_ : nullptr; }

 protected:
  /// Packets larger than a DATAGRAM frame allows go on `stream`.
  void send_on(std::uint32_t stream, const packet::SpacePacket& p);
  void feed(ByteView datagram, Micros now);
  void drain_events();
  std::size_t buffer_footprint() const;

  std::optional<quic::Session> session_;
  std::map<std::uint32_t, packet::PacketDeframer> deframers_;
  std::deque<LinkInput> in_;
};

/// Flight side: answers handshakes with the spacecraft identity key.
class QuicServerLink final : public QuicLinkBase {
 public:
  QuicServerLink(const quic::SessionConfig& config, crypto::Ed25519Identity identity, RandomSource& rng);

  void send_packet(const packet::SpacePacket& p, Micros now) override;
  void on_datagram(ByteView datagram, Micros now) override;
  std::size_t state_footprint() const override;

  quic::TicketStore& tickets() noexcept { return tickets_; }

 private:
  quic::SessionConfig config_;
  std::unique_ptr<crypto::Ed25519Identity> identity_;  // stable address for the session
  quic::TicketStore tickets_;
  RandomSource* rng_;
};

/// Ground side: dials the pinned spacecraft key.
class QuicClientLink final : public QuicLinkBase {
 public:
  QuicClientLink(const quic::SessionConfig& config, const crypto::Ed25519PublicKey& server_key, RandomSource& rng,
                 std::optional<quic::ResumptionTicket> ticket = std::nullopt);

  /// Sends the ClientHello. Throws WrongState when already connected.
  void connect(Micros now);
  void send_packet(const packet::SpacePacket& p, Micros now) override;
  void on_datagram(ByteView datagram, Micros now) override;
  std::optional<Bytes> poll_transmit(Micros now) override;
  std::size_t state_footprint() const override;

 private:
  std::deque<Bytes> hello_;
};

}  // namespace spacelink::endpoints
