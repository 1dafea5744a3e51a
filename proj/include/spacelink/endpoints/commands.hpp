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

#include <array>
#include <optional>
#include <string>
#include <variant>

#include "spacelink/common/kv_config.hpp"
#include "spacelink/packet/space_packet.hpp"

namespace spacelink::endpoints {

enum class FunctionCode : std::uint8_t { Noop = 0, ResetCounters = 1, SetParam = 2, RequestHk = 3 };

inline constexpr std::size_t kParamCount = 4;

struct Command {
  FunctionCode fc = FunctionCode::Noop;
  std::uint8_t param_id = 0;  // SET_PARAM only
  std::uint32_t value = 0;    // SET_PARAM only
  bool operator==(const Command&) const = default;
};

enum class RejectReason : std::uint8_t {
  None = 0,
  BadChecksum = 1,
  UnknownFunction = 2,
  BadLength = 3,
  BadParam = 4,
  MalformedPacket = 5,
  UnknownApid = 6,
  TransportFailure = 7,
};

std::string to_string(FunctionCode fc);
std::string to_string(RejectReason reason);
/// "noop", "reset", "set <id> <value>", "hk".
std::optional<Command> parse_command(std::string_view text);

/// XOR of every payload byte, with the checksum byte counted as zero.
std::uint8_t command_checksum(ByteView payload) noexcept;

/// payload = fc | checksum | args; SET_PARAM args = id u8 | value u32 BE.
Bytes encode_command_payload(const Command& cmd);
std::variant<Command, RejectReason> decode_command_payload(ByteView payload);

struct HkTelemetry {
  std::uint32_t cmd_accept_count = 0;
  std::uint32_t cmd_reject_count = 0;
  std::array<std::uint32_t, kParamCount> params{};
  std::uint64_t uptime_us = 0;

  static constexpr std::size_t kSize = 4 + 4 + 4 * kParamCount + 8;
  Bytes encode() const;
  /// Accepts trailing filler after the fixed fields.
  static std::optional<HkTelemetry> decode(ByteView payload);
  bool operator==(const HkTelemetry&) const = default;
};

enum class EventId : std::uint8_t { CommandAccepted = 1, CommandRejected = 2 };

inline constexpr std::uint16_t kUnknownCommandSeq = 0xffff;

struct EventTelemetry {
  EventId id = EventId::CommandAccepted;
  std::uint16_t cmd_seq = kUnknownCommandSeq;
  std::uint8_t fc = 0;
  RejectReason reason = RejectReason::None;

  static constexpr std::size_t kSize = 5;
  Bytes encode() const;
  static std::optional<EventTelemetry> decode(ByteView payload);
  bool operator==(const EventTelemetry&) const = default;
};

/// APID / message-id pair for one app: commands in, telemetry out.
struct AppRoute {
  std::uint16_t apid = 0;
  std::uint16_t cmd_mid = 0;
  std::uint16_t tlm_mid = 0;
};

/// Static routing table. Defaults follow the usual cmd 0x18xx / tlm 0x08xx split.
struct RouteTable {
  AppRoute hk{0x042, 0x1842, 0x0842};
  AppRoute events{0x043, 0x1843, 0x0843};

  /// Reads `route.<hk|events>.<apid|cmd_mid|tlm_mid>` overrides.
  static RouteTable from(const KeyValueConfig& cfg);
};

}  // namespace spacelink::endpoints
