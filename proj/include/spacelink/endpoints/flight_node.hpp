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

#include <memory>
#include <vector>

#include "spacelink/bus/software_bus.hpp"
#include "spacelink/endpoints/commands.hpp"
#include "spacelink/endpoints/link.hpp"

namespace spacelink::endpoints {

struct FlightConfig {
  RouteTable routes;
  Micros hk_period = 1_s;  // zero disables periodic housekeeping
  std::size_t ci_pipe_depth = 32;
  std::size_t hk_pipe_depth = 32;
  std::size_t to_pipe_depth = 64;

  /// Reads `hk_period_ms`, `pipe.<ci|hk|to>.depth` and the route table.
  static FlightConfig from(const KeyValueConfig& cfg);
};

struct CommandRecord {
  std::uint16_t seq = 0;
  FunctionCode fc = FunctionCode::Noop;
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  Micros at{0};
};

/// The spacecraft: CI, housekeeping and TO apps on one software bus, behind
/// one security layer.
///
/// CI turns uplink input into commands on the bus. The housekeeping app owns
/// the counters and parameter table, executes commands and reports. TO drains
/// its pipe into the downlink.
class FlightNode {
 public:
  FlightNode(const FlightConfig& config, std::unique_ptr<SecureLink> link);

  /// Uplink arrival; runs CI immediately.
  void ci_ingest(ByteView datagram, Micros now);
  /// Runs the housekeeping app and TO once.
  void step(Micros now);
  std::optional<Bytes> poll_downlink(Micros now);
  Micros next_wakeup() const;
  void on_timeout(Micros now);

  const HkTelemetry& hk_state() const noexcept { return hk_; }
  const std::vector<CommandRecord>& command_log() const noexcept { return log_; }
  std::uint64_t hk_published() const noexcept { return hk_published_; }
  bus::SoftwareBus& bus() noexcept { return bus_; }
  const bus::SoftwareBus& bus() const noexcept { return bus_; }
  bus::PipeId to_pipe() const noexcept { return to_pipe_; }
  SecureLink& link() noexcept { return *link_; }
  const SecureLink& link() const noexcept { return *link_; }
  const FlightConfig& config() const noexcept { return config_; }
  /// Security-layer state bytes only (bus and app state are mode independent).
  std::size_t security_footprint() const { return link_->state_footprint(); }

  /// Publishes HK telemetry now, padded with `filler` extra bytes.
  void publish_hk(Micros now, std::size_t filler = 0);
  /// Runs TO alone: drain the pipe and hand packets to the link.
  void to_downlink(Micros now);

 private:
  void ci_handle(const LinkInput& input, Micros now);
  void hk_execute(const packet::SpacePacket& cmd, Micros now);
  void reject(std::uint16_t seq, std::uint8_t fc, RejectReason reason, Micros now);
  void emit_event(const EventTelemetry& e, Micros now);
  std::uint16_t next_tlm_seq(std::uint16_t apid);

  FlightConfig config_;
  std::unique_ptr<SecureLink> link_;
  bus::SoftwareBus bus_;
  bus::PipeId hk_pipe_;
  bus::PipeId to_pipe_;
  HkTelemetry hk_;
  std::vector<CommandRecord> log_;
  std::map<std::uint16_t, std::uint16_t> tlm_seq_;
  Micros next_hk_;
  std::uint64_t hk_published_ = 0;
};

}  // namespace spacelink::endpoints
