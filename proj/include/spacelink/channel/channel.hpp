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

#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "spacelink/common/bytes.hpp"
#include "spacelink/common/kv_config.hpp"
#include "spacelink/common/random.hpp"
#include "spacelink/common/time.hpp"

namespace spacelink::channel {

enum class Direction : std::uint8_t { Up = 0, Down = 1 };

struct ChannelConfig {
  Micros one_way_delay{0};
  Micros jitter{0};  // uniform in [-jitter, +jitter]
  double loss_rate = 0.0;
  double corrupt_byte_rate = 0.0;
  double duplicate_rate = 0.0;
  std::uint64_t bandwidth_bps = 0;  // 0 = unlimited
  std::uint64_t seed = 1;

  /// Throws InvalidConfig when a rate leaves [0, 1] or a delay is negative.
  void validate() const;
};

/// Named presets. Delay/loss values are artifact choices, not measurements.
ChannelConfig leo_profile();   // 10 ms one-way
ChannelConfig geo_profile();   // 275 ms one-way
ChannelConfig profile_by_name(const std::string& name);

/// Overlays `one_way_delay_us`, `jitter_us`, `loss_rate`, `corrupt_byte_rate`,
/// `duplicate_rate`, `bandwidth_bps`, `seed` and `profile` keys onto `base`.
ChannelConfig config_from(const KeyValueConfig& cfg, ChannelConfig base = {});

struct LinkEvent {
  Micros deliver_at{0};
  Bytes datagram;
  Direction direction = Direction::Up;

  bool operator==(const LinkEvent&) const = default;
};

struct ChannelStats {
  std::uint64_t sent = 0;
  std::uint64_t dropped = 0;
  std::uint64_t duplicated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t corrupted_bytes = 0;
};

/// Deterministic lossy link on a virtual timeline.
///
/// Two generators are split off the seed: the first decides drops (exactly one
/// draw per send, so `loss_oracle` can replay it), the second drives jitter,
/// corruption and duplication.
class Channel {
 public:
  explicit Channel(const ChannelConfig& config);

  void send(ByteView datagram, Direction direction, Micros now);

  /// Pops every event with deliver_at <= until, in (deliver_at, insertion) order,
  /// and moves the clock to `until`. Throws ClockRegression.
  std::vector<LinkEvent> advance(Micros until);

  Micros now() const noexcept { return now_; }
  /// Earliest pending delivery, or kNever.
  Micros next_delivery() const noexcept;
  std::size_t in_transit() const noexcept { return queue_.size(); }
  const ChannelStats& stats() const noexcept { return stats_; }
  const ChannelConfig& config() const noexcept { return config_; }

 private:
  struct Scheduled {
    Micros deliver_at;
    std::uint64_t order;
    LinkEvent event;
  };
  struct Later {
    bool operator()(const Scheduled& a, const Scheduled& b) const noexcept {
      return a.deliver_at != b.deliver_at ? a.deliver_at > b.deliver_at : a.order > b.order;
    }
  };

  Micros jittered(Micros base);
  Bytes maybe_corrupt(ByteView datagram);

  ChannelConfig config_;
  Xoshiro256 loss_rng_;
  Xoshiro256 aux_rng_;
  std::priority_queue<Scheduled, std::vector<Scheduled>, Later> queue_;
  Micros now_{0};
  Micros busy_until_[2]{Micros{0}, Micros{0}};
  std::uint64_t order_ = 0;
  ChannelStats stats_;
};

/// The drop decision the channel makes for each of its first `n` sends.
std::vector<bool> loss_oracle(std::uint64_t seed, double loss_rate, std::size_t n);

}  // namespace spacelink::channel
