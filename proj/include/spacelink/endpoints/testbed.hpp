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

#include <functional>
#include <memory>

#include "spacelink/channel/channel.hpp"
#include "spacelink/endpoints/flight_node.hpp"
#include "spacelink/endpoints/ground_station.hpp"

namespace spacelink::endpoints {

/// Shared secrets both ends are provisioned with.
struct KeyMaterial {
  sdls::SaParameters sa;
  crypto::Ed25519Seed identity_seed{};

  /// Deterministic material for simulations.
  static KeyMaterial from_seed(std::uint64_t seed, crypto::AeadAlgorithm alg);
};

struct TestbedConfig {
  SecurityMode mode;
  channel::ChannelConfig channel;
  FlightConfig flight;
  quic::SessionConfig quic;  // algorithm is taken from mode.backend
  std::optional<Micros> command_deadline;
  std::optional<KeyMaterial> keys;  // default: KeyMaterial::from_seed(channel.seed)
  bool record_samples = false;
};

struct FootprintSample {
  Micros at{0};
  std::size_t bytes = 0;
};

std::unique_ptr<SecureLink> make_flight_link(const SecurityMode& mode, const KeyMaterial& keys,
                                             const quic::SessionConfig& quic, RandomSource& rng);
std::unique_ptr<SecureLink> make_ground_link(const SecurityMode& mode, const KeyMaterial& keys,
                                             const quic::SessionConfig& quic, RandomSource& rng,
                                             std::optional<quic::ResumptionTicket> ticket = std::nullopt);

/// Flight node, ground station and channel on one virtual timeline.
///
/// After every batch of events at one instant, both nodes flush their output
/// into the channel and the flight security footprint is sampled.
class Testbed {
 public:
  explicit Testbed(const TestbedConfig& config);

  FlightNode& flight() noexcept { return *flight_; }
  GroundStation& ground() noexcept { return *ground_; }
  channel::Channel& channel() noexcept { return channel_; }
  Micros now() const noexcept { return now_; }
  const TestbedConfig& config() const noexcept { return config_; }

  /// Starts the ground handshake (Quic) at the current time.
  void connect();
  /// Replaces the ground station, keeping the flight node, e.g. to resume with a ticket.
  void reconnect(std::optional<quic::ResumptionTicket> ticket);
  /// Ticket the ground received during the current connection.
  std::optional<quic::ResumptionTicket> ground_ticket() const;

  void run_until(Micros until);
  void run_for(Micros duration) { run_until(now_ + duration); }
  /// Runs until `done()` or `limit`; returns done().
  bool run_until(const std::function<bool()>& done, Micros limit);

  /// Sends one command and runs until its outcome is known.
  /// Throws NotConnected if the ground link is not ready.
  CommandOutcome command(const Command& cmd);
  std::uint16_t send_command(const Command& cmd);

  std::size_t peak_footprint() const noexcept { return peak_; }
  const std::vector<FootprintSample>& samples() const noexcept { return samples_; }

 private:
  void process(Micros t);
  void flush(Micros t);
  void sample(Micros t);
  Micros next_event() const;

  TestbedConfig config_;
  KeyMaterial keys_;
  std::unique_ptr<SeededRandom> flight_rng_;
  std::unique_ptr<SeededRandom> ground_rng_;
  channel::Channel channel_;
  std::unique_ptr<FlightNode> flight_;
  std::unique_ptr<GroundStation> ground_;
  Micros now_{0};
  std::size_t peak_ = 0;
  std::vector<FootprintSample> samples_;
};

}  // namespace spacelink::endpoints
