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

#include <map>
#include <memory>
#include <vector>

#include "spacelink/endpoints/commands.hpp"
#include "spacelink/endpoints/link.hpp"

namespace spacelink::endpoints {

enum class CommandOutcome : std::uint8_t { Pending, Accepted, Rejected, TimedOut };

std::string to_string(CommandOutcome outcome);

struct GroundConfig {
  RouteTable routes;
  /// Seeds the RTT estimate (2x this value) until the first command round trip.
  Micros one_way_delay = 10_ms;
  /// Fixed command deadline; unset means 4x the current RTT estimate.
  std::optional<Micros> deadline;
};

struct PendingCommand {
  Command cmd;
  Micros sent_at{0};
  Micros deadline{0};
  CommandOutcome outcome = CommandOutcome::Pending;
  RejectReason reason = RejectReason::None;
  std::optional<Micros> resolved_at;
};

/// Ground client: sends commands and matches them to event telemetry by
/// packet sequence count.
class GroundStation {
 public:
  GroundStation(const GroundConfig& config, std::unique_ptr<SecureLink> link);

  /// Quic mode: starts the handshake. No-op for the other modes.
  void connect(Micros now);
  bool connected() const { return link_->ready(); }

  /// Encodes, protects and queues a command; returns its sequence count.
  /// Throws NotConnected when the link cannot carry it yet.
  std::uint16_t send_command(const Command& cmd, Micros now);
  CommandOutcome outcome(std::uint16_t seq) const;
  const PendingCommand* find(std::uint16_t seq) const;

  void on_downlink(ByteView datagram, Micros now);
  std::optional<Bytes> poll_uplink(Micros now);
  Micros next_wakeup() const;
  void on_timeout(Micros now);

  Micros rtt_estimate() const noexcept { return rtt_; }
  const std::vector<HkTelemetry>& hk_received() const noexcept { return hk_; }
  const std::vector<EventTelemetry>& events_received() const noexcept { return events_; }
  std::uint64_t downlink_faults() const noexcept { return faults_; }
  std::uint64_t unmatched_events() const noexcept { return unmatched_; }
  SecureLink& link() noexcept { return *link_; }
  const SecureLink& link() const noexcept { return *link_; }

 private:
  void handle(const LinkInput& input, Micros now);
  void expire(Micros now);

  GroundConfig config_;
  std::unique_ptr<SecureLink> link_;
  std::uint16_t next_seq_ = 0;
  std::map<std::uint16_t, PendingCommand> commands_;
  Micros rtt_;
  bool rtt_sampled_ = false;
  std::vector<HkTelemetry> hk_;
  std::vector<EventTelemetry> events_;
  std::uint64_t faults_ = 0;
  std::uint64_t unmatched_ = 0;
};

}  // namespace spacelink::endpoints
