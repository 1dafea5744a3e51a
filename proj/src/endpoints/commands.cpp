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

#include "spacelink/endpoints/commands.hpp"

#include <sstream>

namespace spacelink::endpoints {

std::string to_string(FunctionCode fc) {
  switch (fc) {
    case FunctionCode::Noop: return "NOOP";
    case FunctionCode::ResetCounters: return "RESET_COUNTERS";
    case FunctionCode::SetParam: return "SET_PARAM";
    case FunctionCode::RequestHk: return "REQUEST_HK";
  }
  return "FC_" + std::to_string(static_cast<int>(fc));
}

std::string to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::None: return "none";
    case RejectReason::BadChecksum: return "bad checksum";
    case RejectReason::UnknownFunction: return "unknown function code";
    case RejectReason::BadLength: return "bad length";
    case RejectReason::BadParam: return "bad parameter";
    case RejectReason::MalformedPacket: return "malformed packet";
    case RejectReason::UnknownApid: return "unknown apid";
    case RejectReason::TransportFailure: return "transport failure";
  }
  return "reason " + std::to_string(static_cast<int>(reason));
}

std::optional<Command> parse_command(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string word;
  in >> word;
  if (word == "noop") return Command{FunctionCode::Noop};
  if (word == "reset") return Command{FunctionCode::ResetCounters};
  if (word == "hk") return Command{FunctionCode::RequestHk};
  if (word == "set") {
    unsigned id = 0;
    unsigned long value = 0;
    if (!(in >> id >> value) || id > 0xff || value > 0xffffffffUL) return std::nullopt;
    return Command{FunctionCode::SetParam, static_cast<std::uint8_t>(id), static_cast<std::uint32_t>(value)};
  }
  return std::nullopt;
}

std::uint8_t command_checksum(ByteView payload) noexcept {
  std::uint8_t x = 0;
  for (std::size_t i = 0; i < payload.size(); ++i) {
    if (i != 1) x ^= payload[i];
  }
  return x;
}

Bytes encode_command_payload(const Command& cmd) {
  Bytes out;
  ByteWriter w(out);
  w.u8(static_cast<std::uint8_t>(cmd.fc));
  w.u8(0);
  if (cmd.fc == FunctionCode::SetParam) {
    w.u8(cmd.param_id);
    w.u32(cmd.value);
  }
  out[1] = command_checksum(out);
  return out;
}

std::variant<Command, RejectReason> decode_command_payload(ByteView payload) {
  if (payload.size() < 2) return RejectReason::BadLength;
  if (command_checksum(payload) != payload[1]) return RejectReason::BadChecksum;
  if (payload[0] > static_cast<std::uint8_t>(FunctionCode::RequestHk)) return RejectReason::UnknownFunction;
  Command cmd;
  cmd.fc = static_cast<FunctionCode>(payload[0]);
  if (cmd.fc == FunctionCode::SetParam) {
    if (payload.size() != 7) return RejectReason::BadLength;
    cmd.param_id = payload[2];
    cmd.value = load_be32(payload.data() + 3);
  } else if (payload.size() != 2) {
    return RejectReason::BadLength;
  }
  return cmd;
}

Bytes HkTelemetry::encode() const {
  Bytes out;
  out.reserve(kSize);
  ByteWriter w(out);
  w.u32(cmd_accept_count);
  w.u32(cmd_reject_count);
  for (auto p : params) w.u32(p);
  w.u64(uptime_us);
  return out;
}

std::optional<HkTelemetry> HkTelemetry::decode(ByteView payload) {
  if (payload.size() < kSize) return std::nullopt;
  ByteReader r(payload);
  HkTelemetry hk;
  hk.cmd_accept_count = r.u32();
  hk.cmd_reject_count = r.u32();
  for (auto& p : hk.params) p = r.u32();
  hk.uptime_us = r.u64();
  return hk;
}

Bytes EventTelemetry::encode() const {
  Bytes out;
  ByteWriter w(out);
  w.u8(static_cast<std::uint8_t>(id));
  w.u16(cmd_seq);
  w.u8(fc);
  w.u8(static_cast<std::uint8_t>(reason));
  return out;
}

std::optional<EventTelemetry> EventTelemetry::decode(ByteView payload) {
  if (payload.size() != kSize) return std::nullopt;
  if (payload[0] != 1 && payload[0] != 2) return std::nullopt;
  if (payload[4] > static_cast<std::uint8_t>(RejectReason::TransportFailure)) return std::nullopt;
  EventTelemetry e;
  e.id = static_cast<EventId>(payload[0]);
  e.cmd_seq = load_be16(payload.data() + 1);
  e.fc = payload[3];
  e.reason = static_cast<RejectReason>(payload[4]);
  return e;
}

RouteTable RouteTable::from(const KeyValueConfig& cfg) {
  RouteTable t;
  auto read = [&](const std::string& app, AppRoute& route) {
    route.apid = static_cast<std::uint16_t>(cfg.get_int("route." + app + ".apid", route.apid));
    route.cmd_mid = static_cast<std::uint16_t>(cfg.get_int("route." + app + ".cmd_mid", route.cmd_mid));
    route.tlm_mid = static_cast<std::uint16_t>(cfg.get_int("route." + app + ".tlm_mid", route.tlm_mid));
    if (route.apid > packet::kMaxApid) throw Error(Errc::InvalidConfig, "route." + app + ".apid out of range");
  };
  read("hk", t.hk);
  read("events", t.events);
  return t;
}

}  // namespace spacelink::endpoints
