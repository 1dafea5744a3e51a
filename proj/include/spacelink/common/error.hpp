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

#include <stdexcept>
#include <string>
#include <string_view>

namespace spacelink {

/// Typed failure codes shared by every layer of the stack.
enum class Errc {
  // packet
  EmptyPayload,
  FieldOverflow,
  Truncated,
  BadVersion,
  UnsupportedHeader,
  LengthMismatch,
  // bus
  InvalidCapacity,
  DuplicatePipeName,
  UnknownPipe,
  // sdls
  SeqExhausted,
  AuthFail,
  Replay,
  UnknownSpi,
  // quiclite
  WrongState,
  MalformedHello,
  TicketUnknown,
  HandshakeFailed,
  Oversize,
  NotEstablished,
  UnknownConnId,
  UnknownFrameType,
  MalformedFrame,
  MalformedAck,
  DatagramTooLarge,
  StreamFinished,
  PacketNumberExhausted,
  // channel
  ClockRegression,
  InvalidConfig,
  // endpoints / bench
  NotConnected,
  IoError,
  CryptoUnavailable,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  explicit Error(Errc code, const std::string& detail = {});

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace spacelink
