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

#include "spacelink/common/error.hpp"

namespace spacelink {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyPayload: return "EmptyPayload";
    case Errc::FieldOverflow: return "FieldOverflow";
    case Errc::Truncated: return "Truncated";
    case Errc::BadVersion: return "BadVersion";
    case Errc::UnsupportedHeader: return "UnsupportedHeader";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidCapacity: return "InvalidCapacity";
    case Errc::DuplicatePipeName: return "DuplicatePipeName";
    case Errc::UnknownPipe: return "UnknownPipe";
    case Errc::SeqExhausted: return "SeqExhausted";
    case Errc::AuthFail: return "AuthFail";
    case Errc::Replay: return "Replay";
    case Errc::UnknownSpi: return "UnknownSpi";
    case Errc::WrongState: return "WrongState";
    case Errc::MalformedHello: return "MalformedHello";
    case Errc::TicketUnknown: return "TicketUnknown";
    case Errc::HandshakeFailed: return "HandshakeFailed";
    case Errc::Oversize: return "Oversize";
    case Errc::NotEstablished: return "NotEstablished";
    case Errc::UnknownConnId: return "UnknownConnId";
    case Errc::UnknownFrameType: return "UnknownFrameType";
    case Errc::MalformedFrame: return "MalformedFrame";
    case Errc::MalformedAck: return "MalformedAck";
    case Errc::DatagramTooLarge: return "DatagramTooLarge";
    case Errc::StreamFinished: return "StreamFinished";
    case Errc::PacketNumberExhausted: return "PacketNumberExhausted";
    case Errc::ClockRegression: return "ClockRegression";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::NotConnected: return "NotConnected";
    case Errc::IoError: return "IoError";
    case Errc::CryptoUnavailable: return "CryptoUnavailable";
  }
  return "Unknown";
}

namespace {
std::string format_message(Errc code, const std::string& detail) {
  std::string msg(to_string(code));
  if (!detail.empty()) {
    msg += ": ";
    msg += detail;
  }
  return msg;
}
}  // namespace

Error::Error(Errc code, const std::string& detail) : std::runtime_error(format_message(code, detail)), code_(code) {}

}  // namespace spacelink
