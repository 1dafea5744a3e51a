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

#include "spacelink/endpoints/flight_node.hpp"

namespace spacelink::endpoints {

FlightConfig FlightConfig::from(const KeyValueConfig& cfg) {
  FlightConfig c;
  c.routes = RouteTable::from(cfg);
  c.hk_period = Micros(cfg.get_int("hk_period_ms", c.hk_period.count() / 1000) * 1000);
  c.ci_pipe_depth = static_cast<std::size_t>(cfg.get_int("pipe.ci.depth", static_cast<std::int64_t>(c.ci_pipe_depth)));
  c.hk_pipe_depth = static_cast<std::size_t>(cfg.get_int("pipe.hk.depth", static_cast<std::int64_t>(c.hk_pipe_depth)));
  c.to_pipe_depth = static_cast<std::size_t>(cfg.get_int("pipe.to.depth", static_cast<std::int64_t>(c.to_pipe_depth)));
  if (c.hk_period.count() < 0) throw Error(Errc::InvalidConfig, "hk_period_ms < 0");
  return c;
}

FlightNode::FlightNode(const FlightConfig& config, std::unique_ptr<SecureLink> link)
    : config_(config), link_(std::move(link)), next_hk_(config.hk_period.count() > 0 ? config.hk_period : kNever) {
  hk_pipe_ = bus_.create_pipe("HK", config_.hk_pipe_depth);
  bus_.subscribe(hk_pipe_, bus::MessageId{config_.routes.hk.cmd_mid});
  to_pipe_ = bus_.create_pipe("TO", config_.to_pipe_depth);
  bus_.subscribe(to_pipe_, bus::MessageId{config_.routes.hk.tlm_mid});
  bus_.subscribe(to_pipe_, bus::MessageId{config_.routes.events.tlm_mid});
}

void FlightNode::ci_ingest(ByteView datagram, Micros now) {
  link_->on_datagram(datagram, now);
  while (auto input = link_->poll_input()) ci_handle(*input, now);
}

void FlightNode::ci_handle(const LinkInput& input, Micros now) {
  if (const auto* fault = std::get_if<LinkFault>(&input)) {
    const bool framing = fault->code == Errc::Truncated || fault->code == Errc::BadVersion ||
                         fault->code == Errc::UnsupportedHeader || fault->code == Errc::LengthMismatch;
    reject(kUnknownCommandSeq, 0xff, framing ? RejectReason::MalformedPacket : RejectReason::TransportFailure, now);
    return;
  }
  const auto& p = std::get<packet::SpacePacket>(input);
  const std::uint8_t fc = p.payload.empty() ? 0xff : p.payload[0];
  if (p.type != packet::PacketType::Command) {
    reject(p.seq_count, fc, RejectReason::MalformedPacket, now);
    return;
  }
  if (p.apid != config_.routes.hk.apid) {
    reject(p.seq_count, fc, RejectReason::UnknownApid, now);
    return;
  }
  const auto decoded = decode_command_payload(p.payload);
  if (const auto* reason = std::get_if<RejectReason>(&decoded)) {
    reject(p.seq_count, fc, *reason, now);
    return;
  }
  bus_.publish(bus::BusMessage{bus::MessageId{config_.routes.hk.cmd_mid}, p, now});
}

void FlightNode::reject(std::uint16_t seq, std::uint8_t fc, RejectReason reason, Micros now) {
  ++hk_.cmd_reject_count;
  log_.push_back(CommandRecord{seq, static_cast<FunctionCode>(fc), false, reason, now});
  emit_event(EventTelemetry{EventId::CommandRejected, seq, fc, reason}, now);
}

void FlightNode::emit_event(const EventTelemetry& e, Micros now) {
  const auto apid = config_.routes.events.apid;
  packet::SpacePacket p{packet::PacketType::Telemetry, apid, next_tlm_seq(apid), e.encode()};
  bus_.publish(bus::BusMessage{bus::MessageId{config_.routes.events.tlm_mid}, std::move(p), now});
}

std::uint16_t FlightNode::next_tlm_seq(std::uint16_t apid) {
  auto& seq = tlm_seq_[apid];
  const auto out = seq;
  seq = static_cast<std::uint16_t>((seq + 1) & packet::kMaxSeqCount);
  return out;
}

void FlightNode::hk_execute(const packet::SpacePacket& p, Micros now) {
  const auto cmd = std::get<Command>(decode_command_payload(p.payload));
  const auto fc = static_cast<std::uint8_t>(cmd.fc);
  switch (cmd.fc) {
    case FunctionCode::Noop:
      break;
    case FunctionCode::ResetCounters:
      hk_.cmd_accept_count = 0;
      hk_.cmd_reject_count = 0;
      break;
    case FunctionCode::SetParam:
      if (cmd.param_id >= kParamCount) {
        reject(p.seq_count, fc, RejectReason::BadParam, now);
        return;
      }
      hk_.params[cmd.param_id] = cmd.value;
      break;
    case FunctionCode::RequestHk:
      break;
  }
  // A reset zeroes the counters, then counts itself.
  ++hk_.cmd_accept_count;
  log_.push_back(CommandRecord{p.seq_count, cmd.fc, true, RejectReason::None, now});
  emit_event(EventTelemetry{EventId::CommandAccepted, p.seq_count, fc, RejectReason::None}, now);
  if (cmd.fc == FunctionCode::RequestHk) publish_hk(now);
}

void FlightNode::publish_hk(Micros now, std::size_t filler) {
  hk_.uptime_us = static_cast<std::uint64_t>(now.count());
  auto payload = hk_.encode();
  payload.resize(payload.size() + filler, 0);
  const auto apid = config_.routes.hk.apid;
  packet::SpacePacket p{packet::PacketType::Telemetry, apid, next_tlm_seq(apid), std::move(payload)};
  bus_.publish(bus::BusMessage{bus::MessageId{config_.routes.hk.tlm_mid}, std::move(p), now});
  ++hk_published_;
}

void FlightNode::to_downlink(Micros now) {
  while (auto msg = bus_.receive(to_pipe_)) link_->send_packet(msg->packet, now);
}

void FlightNode::step(Micros now) {
  while (auto msg = bus_.receive(hk_pipe_)) hk_execute(msg->packet, now);
  while (now >= next_hk_) {
    publish_hk(next_hk_);
    next_hk_ += config_.hk_period;
  }
  to_downlink(now);
}

std::optional<Bytes> FlightNode::poll_downlink(Micros now) { return link_->poll_transmit(now); }

Micros FlightNode::next_wakeup() const { return std::min(next_hk_, link_->next_timeout()); }

void FlightNode::on_timeout(Micros now) {
  if (now >= link_->next_timeout()) link_->on_timeout(now);
  // Handshakes and acknowledgements may have changed what the link can carry.
  while (auto input = link_->poll_input()) ci_handle(*input, now);
}

}  // namespace spacelink::endpoints
