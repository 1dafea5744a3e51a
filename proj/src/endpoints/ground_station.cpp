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

#include "spacelink/endpoints/ground_station.hpp"

namespace spacelink::endpoints {

std::string to_string(CommandOutcome outcome) {
  switch (outcome) {
    case CommandOutcome::Pending: return "pending";
    case CommandOutcome::Accepted: return "accepted";
    case CommandOutcome::Rejected: return "rejected";
    case CommandOutcome::TimedOut: return "timed out";
  }
  return "unknown";
}

GroundStation::GroundStation(const GroundConfig& config, std::unique_ptr<SecureLink> link)
    : config_(config), link_(std::move(link)), rtt_(2 * config.one_way_delay) {}

void GroundStation::connect(Micros now) {
  if (auto* quic = dynamic_cast<QuicClientLink*>(link_.get())) quic->connect(now);
}

std::uint16_t GroundStation::send_command(const Command& cmd, Micros now) {
  if (!link_->ready()) throw Error(Errc::NotConnected, "link not ready");
  const auto seq = next_seq_;
  next_seq_ = static_cast<std::uint16_t>((next_seq_ + 1) & packet::kMaxSeqCount);
  packet::SpacePacket p{packet::PacketType::Command, config_.routes.hk.apid, seq, encode_command_payload(cmd)};
  link_->send_packet(p, now);
  const auto wait = config_.deadline.value_or(4 * rtt_);
  commands_.insert_or_assign(seq, PendingCommand{cmd, now, now + wait, CommandOutcome::Pending, RejectReason::None, std::nullopt});
  return seq;
}

CommandOutcome GroundStation::outcome(std::uint16_t seq) const {
  const auto* c = find(seq);
  return c ? c->outcome : CommandOutcome::Pending;
}

const PendingCommand* GroundStation::find(std::uint16_t seq) const {
  auto it = commands_.find(seq);
  return it == commands_.end() ? nullptr : &it->second;
}

void GroundStation::on_downlink(ByteView datagram, Micros now) {
  link_->on_datagram(datagram, now);
  while (auto input = link_->poll_input()) handle(*input, now);
}

void GroundStation::handle(const LinkInput& input, Micros now) {
  if (std::holds_alternative<LinkFault>(input)) {
    ++faults_;
    return;
  }
  const auto& p = std::get<packet::SpacePacket>(input);
  if (p.type != packet::PacketType::Telemetry) {
    ++faults_;
    return;
  }
  if (p.apid == config_.routes.hk.apid) {
    if (auto hk = HkTelemetry::decode(p.payload)) {
      hk_.push_back(*hk);
    } else {
      ++faults_;
    }
    return;
  }
  if (p.apid != config_.routes.events.apid) {
    ++faults_;
    return;
  }
  const auto event = EventTelemetry::decode(p.payload);
  if (!event) {
    ++faults_;
    return;
  }
  events_.push_back(*event);
  auto it = commands_.find(event->cmd_seq);
  if (it == commands_.end() || it->second.outcome != CommandOutcome::Pending) {
    ++unmatched_;
    return;
  }
  auto& c = it->second;
  c.outcome = event->id == EventId::CommandAccepted ? CommandOutcome::Accepted : CommandOutcome::Rejected;
  c.reason = event->reason;
  c.resolved_at = now;
  const auto sample = now - c.sent_at;
  rtt_ = rtt_sampled_ ? (7 * rtt_ + sample) / 8 : sample;
  rtt_sampled_ = true;
}

void GroundStation::expire(Micros now) {
  for (auto& [seq, c] : commands_) {
    if (c.outcome == CommandOutcome::Pending && now >= c.deadline) {
      c.outcome = CommandOutcome::TimedOut;
      c.resolved_at = now;
    }
  }
}

std::optional<Bytes> GroundStation::poll_uplink(Micros now) { return link_->poll_transmit(now); }

Micros GroundStation::next_wakeup() const {
  Micros t = link_->next_timeout();
  for (const auto& [seq, c] : commands_) {
    if (c.outcome == CommandOutcome::Pending) t = std::min(t, c.deadline);
  }
  return t;
}

void GroundStation::on_timeout(Micros now) {
  if (now >= link_->next_timeout()) link_->on_timeout(now);
  while (auto input = link_->poll_input()) handle(*input, now);
  expire(now);
}

}  // namespace spacelink::endpoints
