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

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "spacelink/common/kv_config.hpp"
#include "spacelink/endpoints/commands.hpp"
#include "spacelink/endpoints/testbed.hpp"

namespace spacelink::tools {

inline constexpr std::uint16_t kDefaultFlightPort = 47100;

/// Key material from a config file.
///
/// `sdls.keys` names a key file (SPI chosen by `sdls.spi`, default 1) and
/// `identity.seed` holds the 32-byte spacecraft identity seed in hex. Anything
/// missing is derived from `keys.seed`.
endpoints::KeyMaterial load_keys(const KeyValueConfig& cfg, crypto::AeadAlgorithm alg);

crypto::AeadAlgorithm parse_backend(const std::string& name);

/// A scripted ground action.
struct Action {
  enum class Kind { Command, Reconnect, Wait } kind = Kind::Command;
  endpoints::Command cmd;
  Micros wait{0};
  std::string text;
};

/// Parses `noop`, `reset`, `hk`, `set <id> <value>`, `reconnect` and
/// `wait <ms>` from a flat token list. Arguments may hold several tokens.
std::vector<Action> parse_actions(const std::vector<std::string>& args);

/// Wall clock since construction, in the stack's microsecond units.
class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  Micros now() const {
    return std::chrono::duration_cast<Micros>(std::chrono::steady_clock::now() - start_);
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Non-blocking IPv4 UDP socket on localhost.
class UdpSocket {
 public:
  /// Binds 127.0.0.1:port (0 picks an ephemeral port).
  explicit UdpSocket(std::uint16_t port);
  ~UdpSocket();
  UdpSocket(const UdpSocket&) = delete;
  UdpSocket& operator=(const UdpSocket&) = delete;

  std::uint16_t port() const noexcept { return port_; }
  void send_to(ByteView datagram, std::uint16_t port);
  /// Returns the datagram and the sender port.
  std::optional<std::pair<Bytes, std::uint16_t>> receive();
  /// Blocks until readable or `timeout` passes.
  bool wait(Micros timeout);

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace spacelink::tools
