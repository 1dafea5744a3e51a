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

#include <algorithm>

#include "spacelink/bench/scenarios.hpp"
#include "spacelink/endpoints/arq.hpp"
#include "spacelink/endpoints/testbed.hpp"

namespace spacelink::bench {

namespace {

constexpr std::uint32_t kTransferStream = endpoints::kCommandStream;
constexpr std::uint16_t kTransferApid = 0x050;

quic::SessionConfig session_config(crypto::AeadAlgorithm alg) {
  quic::SessionConfig c;
  c.algorithm = alg;
  return c;
}

double goodput(std::size_t bytes, Micros elapsed) {
  if (elapsed.count() <= 0) return 0;
  return static_cast<double>(bytes) * 1e6 / static_cast<double>(elapsed.count());
}

/// A client/server pair with their channel; the server side collects stream 0.
struct QuicRun {
  channel::Channel channel;
  crypto::Ed25519Identity identity;
  quic::TicketStore* tickets;
  SeededRandom client_rng;
  SeededRandom server_rng;
  quic::Session client;
  quic::Session server;
  Micros now{0};
  Bytes received;
  bool fin = false;
  std::optional<Micros> first_byte_at;
  std::optional<Micros> fin_at;

  QuicRun(const channel::ChannelConfig& cfg, crypto::AeadAlgorithm alg, std::uint64_t seed, quic::TicketStore& store,
          std::optional<quic::ResumptionTicket> ticket, Micros start)
      : channel(cfg),
        identity(crypto::Ed25519Identity::from_seed(endpoints::KeyMaterial::from_seed(seed, alg).identity_seed)),
        tickets(&store),
        client_rng(seed * 31 + 7 + (ticket ? 1000 : 0)),
        server_rng(seed * 37 + 11 + (ticket ? 1000 : 0)),
        client(quic::Session::client(session_config(alg), identity.public_key(), client_rng, std::move(ticket))),
        server(quic::Session::server(session_config(alg), identity, store, server_rng)),
        now(start) {
    if (start > Micros{0}) channel.advance(start);
  }

  void connect() {
    channel.send(client.client_hello(now), channel::Direction::Up, now);
    flush();
  }

  void flush() {
    bool moved = true;
    while (moved) {
      moved = false;
      while (auto d = client.poll_transmit(now)) {
        channel.send(*d, channel::Direction::Up, now);
        moved = true;
      }
      while (auto d = server.poll_transmit(now)) {
        channel.send(*d, channel::Direction::Down, now);
        moved = true;
      }
    }
  }

  void drain() {
    while (auto e = server.poll_event()) {
      if (auto* s = std::get_if<quic::StreamDataEvent>(&*e)) {
        if (!s->data.empty() && !first_byte_at) first_byte_at = now;
        received.insert(received.end(), s->data.begin(), s->data.end());
        if (s->fin) {
          fin = true;
          fin_at = now;
        }
      }
    }
    while (client.poll_event()) {
    }
  }

  template <typename Done>
  void run(Done done, Micros limit) {
    while (!done()) {
      auto t = std::min({channel.next_delivery(), client.next_timeout(), server.next_timeout()});
      t = std::max(t, now);
      if (t == kNever || t > limit) break;
      now = t;
      for (auto& ev : channel.advance(t)) {
        if (ev.direction == channel::Direction::Up) {
          server.on_datagram(ev.datagram, t);
        } else {
          client.on_datagram(ev.datagram, t);
        }
      }
      if (client.next_timeout() <= t) client.on_timeout(t);
      if (server.next_timeout() <= t) server.on_timeout(t);
      drain();
      flush();
      drain();
    }
  }
};

}  // namespace

std::size_t arq_chunk_size() { return quic::kMss - sdls::kFrameOverhead - endpoints::kArqHeaderSize; }

TransferResult transfer_quic(const channel::ChannelConfig& cfg, ByteView payload, crypto::AeadAlgorithm alg,
                             std::uint64_t seed, Micros limit) {
  quic::TicketStore store;
  QuicRun run(cfg, alg, seed, store, std::nullopt, Micros{0});
  run.connect();
  run.client.send_stream(kTransferStream, payload, true);
  run.run([&] { return run.fin; }, limit);

  TransferResult r;
  r.complete = run.fin;
  r.delivered = run.received.size();
  r.intact = run.fin && std::equal(run.received.begin(), run.received.end(), payload.begin(), payload.end());
  r.elapsed = run.fin_at.value_or(run.now);
  r.goodput_bps = r.complete ? goodput(r.delivered, r.elapsed) : 0;
  r.retransmissions = run.client.stats().frames_retransmitted;
  r.datagrams_sent = run.client.stats().packets_sent;
  return r;
}

TransferResult transfer_sdls_arq(const channel::ChannelConfig& cfg, ByteView payload, crypto::AeadAlgorithm alg,
                                 std::uint64_t seed, Micros limit) {
  auto params = endpoints::KeyMaterial::from_seed(seed, alg).sa;
  params.algorithm = alg;
  sdls::SecurityAssociation ground(params, sdls::SaRole::Ground);
  sdls::SecurityAssociation flight(params, sdls::SaRole::Flight);
  channel::Channel ch(cfg);
  endpoints::StopAndWaitSender sender(2 * cfg.one_way_delay, arq_chunk_size());
  endpoints::StopAndWaitReceiver receiver;
  sender.submit(payload);

  std::uint16_t up_seq = 0;
  std::uint16_t down_seq = 0;
  Micros now{0};
  std::optional<Micros> done_at;
  auto pump = [&] {
    while (auto f = sender.poll(now)) {
      packet::SpacePacket p{packet::PacketType::Command, kTransferApid, up_seq, std::move(*f)};
      up_seq = static_cast<std::uint16_t>((up_seq + 1) & packet::kMaxSeqCount);
      ch.send(ground.apply(p), channel::Direction::Up, now);
    }
  };
  pump();
  while (!done_at && !sender.failed()) {
    auto t = std::max(now, std::min(ch.next_delivery(), sender.next_timeout()));
    if (t == kNever || t > limit) break;
    now = t;
    for (auto& ev : ch.advance(t)) {
      try {
        if (ev.direction == channel::Direction::Up) {
          const auto p = flight.accept(ev.datagram);
          if (auto ack = receiver.on_frame(p.payload)) {
            packet::SpacePacket a{packet::PacketType::Telemetry, kTransferApid, down_seq, std::move(*ack)};
            down_seq = static_cast<std::uint16_t>((down_seq + 1) & packet::kMaxSeqCount);
            ch.send(flight.apply(a), channel::Direction::Down, now);
          }
          if (receiver.received().size() == payload.size()) done_at = now;
        } else {
          sender.on_ack(ground.accept(ev.datagram).payload, now);
        }
      } catch (const Error&) {
        // Corrupted or replayed frames are dropped; the shim resends.
      }
    }
    if (sender.next_timeout() <= now) sender.on_timeout(now);
    pump();
  }

  TransferResult r;
  r.complete = done_at.has_value();
  r.delivered = receiver.received().size();
  r.intact = r.complete && std::equal(receiver.received().begin(), receiver.received().end(), payload.begin(), payload.end());
  r.elapsed = done_at.value_or(now);
  r.goodput_bps = r.complete ? goodput(r.delivered, r.elapsed) : 0;
  r.retransmissions = sender.stats().retransmissions;
  r.datagrams_sent = sender.stats().frames_sent;
  return r;
}

HandshakeResult measure_handshake(const channel::ChannelConfig& cfg, crypto::AeadAlgorithm alg, std::uint64_t seed,
                                  bool resumed) {
  quic::TicketStore store;
  std::optional<quic::ResumptionTicket> ticket;
  Micros start{0};
  if (resumed) {
    QuicRun first(cfg, alg, seed, store, std::nullopt, Micros{0});
    first.connect();
    first.run([&] { return first.client.issued_ticket().has_value(); }, 60_s);
    ticket = first.client.issued_ticket();
    if (!ticket) return {};
    start = first.now + 1_s;
  }

  QuicRun run(cfg, alg, seed, store, ticket, start);
  const Bytes probe{0x01};
  run.connect();
  HandshakeResult r;
  if (run.client.early_data_enabled()) {
    r.setup = Micros{0};
    run.client.send_stream(kTransferStream, probe, false);
    run.flush();
  }
  run.run([&] { return run.client.state() == quic::State::Established; }, start + 60_s);
  r.established = run.client.state() == quic::State::Established;
  if (!r.established) return r;
  if (!run.client.early_data_enabled()) {
    r.setup = *run.client.established_at() - start;
    run.client.send_stream(kTransferStream, probe, false);
    run.flush();
  }
  run.run([&] { return run.first_byte_at.has_value(); }, start + 60_s);
  if (run.first_byte_at) r.accepted = *run.first_byte_at - start;
  return r;
}

BenchReport bench_throughput(const ThroughputOptions& options) {
  BenchReport report;
  report.scenario = "throughput";
  Bytes payload(options.payload_size);
  SeededRandom(options.seed).fill(payload);
  const std::string backend{crypto::to_string(options.backend)};
  const auto quic_mode = "quic-" + backend + "-stream";
  const auto sdls_mode = "sdls-" + backend + "-arq";
  const auto seed = std::to_string(options.seed);

  for (const auto& profile : options.profiles) {
    for (const auto loss : options.loss_percent) {
      auto cfg = channel::profile_by_name(profile);
      cfg.loss_rate = loss / 100.0;
      cfg.seed = options.seed;
      const auto loss_s = format_value(loss, 1);
      auto row = [&](const std::string& mode, const std::string& metric, std::string value, const std::string& unit) {
        report.add({mode, metric, std::move(value), unit, seed, profile, loss_s, false});
      };
      row("all", "config.payload", format_value(std::uint64_t{options.payload_size}), "bytes");
      row("all", "config.one_way_delay", format_value(static_cast<double>(cfg.one_way_delay.count()) / 1000.0, 3), "ms");
      row("all", "note", "virtual-time simulation; channel profiles are artifact presets", "text");

      const auto rtt_s = 2.0 * static_cast<double>(cfg.one_way_delay.count()) / 1e6;
      row(sdls_mode, "stop_and_wait_bound", format_value(static_cast<double>(arq_chunk_size()) / rtt_s, 1), "B/s");

      const auto q = transfer_quic(cfg, payload, options.backend, options.seed, options.limit);
      const auto s = transfer_sdls_arq(cfg, payload, options.backend, options.seed, options.limit);
      for (const auto& [mode, r] : {std::pair{quic_mode, q}, std::pair{sdls_mode, s}}) {
        row(mode, "goodput", format_value(r.goodput_bps, 1), "B/s");
        row(mode, "transfer_time", format_value(static_cast<double>(r.elapsed.count()) / 1e6, 3), "s");
        row(mode, "delivered", format_value(std::uint64_t{r.delivered}), "bytes");
        row(mode, "intact", r.intact ? "1" : "0", "bool");
        row(mode, "retransmissions", format_value(r.retransmissions), "count");
        row(mode, "datagrams_sent", format_value(r.datagrams_sent), "count");
      }

      for (const bool resumed : {false, true}) {
        const auto h = measure_handshake(cfg, options.backend, options.seed, resumed);
        const std::string kind = resumed ? "0rtt" : "1rtt";
        row(quic_mode, "handshake_setup_" + kind, format_value(static_cast<double>(h.setup.count()) / 1000.0, 3), "ms");
        row(quic_mode, "first_byte_accepted_" + kind,
            h.accepted ? format_value(static_cast<double>(h.accepted->count()) / 1000.0, 3) : "nan", "ms");
      }
    }
  }
  return report;
}

}  // namespace spacelink::bench
