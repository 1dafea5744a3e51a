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

#include "spacelink/channel/channel.hpp"

namespace spacelink::channel {

namespace {
struct Generators {
  Xoshiro256 loss;
  Xoshiro256 aux;
};

Generators split_seed(std::uint64_t seed) {
  SplitMix64 seeder(seed);
  Xoshiro256 loss(seeder);
  Xoshiro256 aux(seeder);
  return {loss, aux};
}

bool draw_drop(Xoshiro256& rng, double loss_rate) { return rng.unit() < loss_rate; }
}  // namespace

void ChannelConfig::validate() const {
  auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate_ok(loss_rate) || !rate_ok(corrupt_byte_rate) || !rate_ok(duplicate_rate)) {
    throw Error(Errc::InvalidConfig, "channel rates must lie in [0, 1]");
  }
  if (one_way_delay < Micros{0} || jitter < Micros{0}) throw Error(Errc::InvalidConfig, "negative delay");
}

ChannelConfig leo_profile() {
  ChannelConfig c;
  c.one_way_delay = 10_ms;
  return c;
}

ChannelConfig geo_profile() {
  ChannelConfig c;
  c.one_way_delay = 275_ms;
  return c;
}

ChannelConfig profile_by_name(const std::string& name) {
  if (name == "leo") return leo_profile();
  if (name == "geo") return geo_profile();
  throw Error(Errc::InvalidConfig, "unknown channel profile: " + name);
}

ChannelConfig config_from(const KeyValueConfig& cfg, ChannelConfig base) {
  if (auto p = cfg.find("profile")) {
    const auto seed = base.seed;
    base = profile_by_name(*p);
    base.seed = seed;
  }
  base.one_way_delay = Micros(cfg.get_int("one_way_delay_us", base.one_way_delay.count()));
  base.jitter = Micros(cfg.get_int("jitter_us", base.jitter.count()));
  base.loss_rate = cfg.get_double("loss_rate", base.loss_rate);
  base.corrupt_byte_rate = cfg.get_double("corrupt_byte_rate", base.corrupt_byte_rate);
  base.duplicate_rate = cfg.get_double("duplicate_rate", base.duplicate_rate);
  base.bandwidth_bps = static_cast<std::uint64_t>(cfg.get_int("bandwidth_bps", static_cast<std::int64_t>(base.bandwidth_bps)));
  base.seed = static_cast<std::uint64_t>(cfg.get_int("seed", static_cast<std::int64_t>(base.seed)));
  base.validate();
  return base;
}

Channel::Channel(const ChannelConfig& config)
    : config_(config), loss_rng_(0), aux_rng_(0) {
  config_.validate();
  auto gens = split_seed(config_.seed);
  loss_rng_ = gens.loss;
  aux_rng_ = gens.aux;
}

Micros Channel::jittered(Micros base) {
  if (config_.jitter.count() == 0) return base;
  const auto span = static_cast<std::uint64_t>(2 * config_.jitter.count() + 1);
  const auto offset = static_cast<Micros::rep>(aux_rng_.below(span)) - config_.jitter.count();
  return base + Micros(offset);
}

Bytes Channel::maybe_corrupt(ByteView datagram) {
  Bytes copy(datagram.begin(), datagram.end());
  if (config_.corrupt_byte_rate <= 0.0) return copy;
  for (auto& byte : copy) {
    if (aux_rng_.unit() < config_.corrupt_byte_rate) {
      byte ^= static_cast<std::uint8_t>(1u << aux_rng_.below(8));
      ++stats_.corrupted_bytes;
    }
  }
  return copy;
}

void Channel::send(ByteView datagram, Direction direction, Micros now) {
  ++stats_.sent;
  const bool drop = draw_drop(loss_rng_, config_.loss_rate);

  auto& busy = busy_until_[static_cast<int>(direction)];
  Micros tx_done = now;
  if (config_.bandwidth_bps > 0) {
    const auto start = std::max(now, busy);
    const auto bits = static_cast<std::uint64_t>(datagram.size()) * 8;
    const auto tx_us = (bits * 1'000'000 + config_.bandwidth_bps - 1) / config_.bandwidth_bps;
    tx_done = start + Micros(static_cast<Micros::rep>(tx_us));
    busy = tx_done;
  }
  if (drop) {
    ++stats_.dropped;
    return;
  }

  const int copies = (config_.duplicate_rate > 0.0 && aux_rng_.unit() < config_.duplicate_rate) ? 2 : 1;
  if (copies == 2) ++stats_.duplicated;
  for (int i = 0; i < copies; ++i) {
    auto at = std::max(jittered(tx_done + config_.one_way_delay), tx_done);
    queue_.push(Scheduled{at, order_++, LinkEvent{at, maybe_corrupt(datagram), direction}});
  }
}

std::vector<LinkEvent> Channel::advance(Micros until) {
  if (until < now_) throw Error(Errc::ClockRegression, "advance to the past");
  std::vector<LinkEvent> out;
  while (!queue_.empty() && queue_.top().deliver_at <= until) {
    out.push_back(queue_.top().event);
    queue_.pop();
  }
  stats_.delivered += out.size();
  now_ = until;
  return out;
}

Micros Channel::next_delivery() const noexcept { return queue_.empty() ? kNever : queue_.top().deliver_at; }

std::vector<bool> loss_oracle(std::uint64_t seed, double loss_rate, std::size_t n) {
  auto gens = split_seed(seed);
  std::vector<bool> drops(n);
  for (std::size_t i = 0; i < n; ++i) drops[i] = draw_drop(gens.loss, loss_rate);
  return drops;
}

}  // namespace spacelink::channel
