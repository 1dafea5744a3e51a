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

#include "spacelink/endpoints/testbed.hpp"

namespace spacelink::endpoints {

KeyMaterial KeyMaterial::from_seed(std::uint64_t seed, crypto::AeadAlgorithm alg) {
  SeededRandom rng(seed ^ 0x6b65792d6d617465ULL);
  KeyMaterial k;
  k.sa.spi = 1;
  k.sa.algorithm = alg;
  rng.fill(k.sa.key);
  rng.fill(k.sa.iv_base);
  rng.fill(k.identity_seed);
  return k;
}

std::unique_ptr<SecureLink> make_flight_link(const SecurityMode& mode, const KeyMaterial& keys,
                                             const quic::SessionConfig& quic, RandomSource& rng) {
  switch (mode.mode) {
    case Mode::None:
      return std::make_unique<PlainLink>();
    case Mode::Sdls: {
      auto sa = keys.sa;
      sa.algorithm = mode.backend;
      return std::make_unique<SdlsLink>(sa, sdls::SaRole::Flight);
    }
    case Mode::Quic: {
      auto cfg = quic;
      cfg.algorithm = mode.backend;
      return std::make_unique<QuicServerLink>(cfg, crypto::Ed25519Identity::from_seed(keys.identity_seed), rng);
    }
  }
  throw Error(Errc::InvalidConfig, "unknown mode");
}

std::unique_ptr<SecureLink> make_ground_link(const SecurityMode& mode, const KeyMaterial& keys,
                                             const quic::SessionConfig& quic, RandomSource& rng,
                                             std::optional<quic::ResumptionTicket> ticket) {
  switch (mode.mode) {
    case Mode::None:
      return std::make_unique<PlainLink>();
    case Mode::Sdls: {
      auto sa = keys.sa;
      sa.algorithm = mode.backend;
      return std::make_unique<SdlsLink>(sa, sdls::SaRole::Ground);
    }
    case Mode::Quic: {
      auto cfg = quic;
      cfg.algorithm = mode.backend;
      const auto server_key = crypto::Ed25519Identity::from_seed(keys.identity_seed).public_key();
      return std::make_unique<QuicClientLink>(cfg, server_key, rng, std::move(ticket));
    }
  }
  throw Error(Errc::InvalidConfig, "unknown mode");
}

Testbed::Testbed(const TestbedConfig& config)
    : config_(config),
      keys_(config.keys.value_or(KeyMaterial::from_seed(config.channel.seed, config.mode.backend))),
      flight_rng_(std::make_unique<SeededRandom>(config.channel.seed * 0x9e3779b97f4a7c15ULL + 1)),
      ground_rng_(std::make_unique<SeededRandom>(config.channel.seed * 0x9e3779b97f4a7c15ULL + 2)),
      channel_(config.channel) {
  flight_ = std::make_unique<FlightNode>(config_.flight,
                                         make_flight_link(config_.mode, keys_, config_.quic, *flight_rng_));
  reconnect(std::nullopt);
}

void Testbed::reconnect(std::optional<quic::ResumptionTicket> ticket) {
  GroundConfig g;
  g.routes = config_.flight.routes;
  g.one_way_delay = config_.channel.one_way_delay;
  g.deadline = config_.command_deadline;
  ground_ = std::make_unique<GroundStation>(
      g, make_ground_link(config_.mode, keys_, config_.quic, *ground_rng_, std::move(ticket)));
}

std::optional<quic::ResumptionTicket> Testbed::ground_ticket() const {
  const auto* link = dynamic_cast<const QuicClientLink*>(&ground_->link());
  if (!link || !link->session()) return std::nullopt;
  return link->session()->issued_ticket();
}

void Testbed::connect() {
  ground_->connect(now_);
  flush(now_);
  sample(now_);
}

std::uint16_t Testbed::send_command(const Command& cmd) {
  const auto seq = ground_->send_command(cmd, now_);
  flush(now_);
  sample(now_);
  return seq;
}

CommandOutcome Testbed::command(const Command& cmd) {
  const auto seq = send_command(cmd);
  const auto* pending = ground_->find(seq);
  const auto limit = pending->deadline + 1_us;
  run_until([&] { return ground_->outcome(seq) != CommandOutcome::Pending; }, limit);
  return ground_->outcome(seq);
}

Micros Testbed::next_event() const {
  return std::max(now_, std::min({channel_.next_delivery(), flight_->next_wakeup(), ground_->next_wakeup()}));
}

void Testbed::run_until(Micros until) {
  run_until([] { return false; }, until);
}

bool Testbed::run_until(const std::function<bool()>& done, Micros limit) {
  Micros last = now_;
  std::size_t same_instant = 0;
  while (!done()) {
    const auto t = next_event();
    if (t > limit || t == kNever) break;
    same_instant = t == last ? same_instant + 1 : 0;
    if (same_instant > 100000) throw Error(Errc::InvalidConfig, "simulation stuck at one instant");
    last = t;
    process(t);
  }
  if (!done() && limit != kNever && limit > now_) {
    channel_.advance(limit);
    now_ = limit;
  }
  return done();
}

void Testbed::process(Micros t) {
  now_ = t;
  for (auto& ev : channel_.advance(t)) {
    if (ev.direction == channel::Direction::Up) {
      flight_->ci_ingest(ev.datagram, t);
    } else {
      ground_->on_downlink(ev.datagram, t);
    }
  }
  if (flight_->next_wakeup() <= t) flight_->on_timeout(t);
  if (ground_->next_wakeup() <= t) ground_->on_timeout(t);
  flight_->step(t);
  flush(t);
  sample(t);
}

void Testbed::flush(Micros t) {
  bool moved = true;
  while (moved) {
    moved = false;
    while (auto d = flight_->poll_downlink(t)) {
      channel_.send(*d, channel::Direction::Down, t);
      moved = true;
    }
    while (auto d = ground_->poll_uplink(t)) {
      channel_.send(*d, channel::Direction::Up, t);
      moved = true;
    }
  }
}

void Testbed::sample(Micros t) {
  const auto bytes = flight_->security_footprint();
  peak_ = std::max(peak_, bytes);
  if (config_.record_samples) samples_.push_back(FootprintSample{t, bytes});
}

}  // namespace spacelink::endpoints
