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

#include <compare>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>

#include "spacelink/common/time.hpp"
#include "spacelink/packet/space_packet.hpp"

namespace spacelink::bus {

struct MessageId {
  std::uint16_t value = 0;
  auto operator<=>(const MessageId&) const = default;
};

struct BusMessage {
  MessageId mid;
  packet::SpacePacket packet;
  Micros publish_time{0};

  bool operator==(const BusMessage&) const = default;
};

struct PipeId {
  std::uint32_t value = 0;
  auto operator<=>(const PipeId&) const = default;
};

struct PipeStats {
  std::string owner;
  std::size_t capacity = 0;
  std::size_t depth = 0;
  std::uint64_t delivered = 0;
  std::uint64_t overflow_count = 0;
};

/// Publish/subscribe router over named, bounded FIFO pipes.
///
/// All operations are serialized by one mutex, so concurrent publishers and
/// receivers observe some sequential interleaving. A full pipe drops the new
/// message and counts it; queued history is never evicted.
class SoftwareBus {
 public:
  PipeId create_pipe(const std::string& owner, std::size_t capacity);
  void close_pipe(PipeId pipe);

  /// Idempotent.
  void subscribe(PipeId pipe, MessageId mid);
  void unsubscribe(PipeId pipe, MessageId mid);

  /// Copies `msg` into every subscribed pipe with room; returns how many received it.
  std::size_t publish(const BusMessage& msg);

  /// Oldest queued message, waiting up to `timeout` (wall time in live mode;
  /// simulations always pass zero) before returning nullopt.
  std::optional<BusMessage> receive(PipeId pipe, Micros timeout = Micros{0});

  PipeStats stats(PipeId pipe) const;
  std::size_t subscriber_count(MessageId mid) const;
  std::uint64_t no_subscriber_count() const;
  std::uint64_t publish_count() const;

 private:
  struct Pipe {
    std::string owner;
    std::size_t capacity = 0;
    std::deque<BusMessage> queue;
    std::uint64_t delivered = 0;
    std::uint64_t overflow_count = 0;
  };

  Pipe& pipe_locked(PipeId id);
  const Pipe& pipe_locked(PipeId id) const;

  mutable std::mutex mutex_;
  std::condition_variable arrived_;
  std::map<PipeId, Pipe> pipes_;
  std::map<MessageId, std::set<PipeId>> routes_;
  std::uint32_t next_pipe_ = 1;
  std::uint64_t no_subscriber_ = 0;
  std::uint64_t publishes_ = 0;
};

}  // namespace spacelink::bus
