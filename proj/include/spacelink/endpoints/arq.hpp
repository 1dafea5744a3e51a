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

#include <deque>
#include <optional>

#include "spacelink/common/bytes.hpp"
#include "spacelink/common/time.hpp"

namespace spacelink::endpoints {

inline constexpr std::size_t kArqHeaderSize = 4;  // seq u32 BE

struct ArqStats {
  std::uint64_t frames_sent = 0;
  std::uint64_t retransmissions = 0;
  std::uint64_t acks_received = 0;
  std::uint64_t stale_acks = 0;
};

/// Stop-and-wait sender: one frame outstanding, resent after 2x the RTT
/// estimate, abandoned after `max_tries` transmissions.
///
/// Frame = seq u32 | data; ack = seq u32.
class StopAndWaitSender {
 public:
  StopAndWaitSender(Micros initial_rtt, std::size_t chunk_size, std::size_t max_tries = 10);

  /// Splits `data` into chunk_size pieces behind anything already queued.
  void submit(ByteView data);
  std::optional<Bytes> poll(Micros now);
  void on_ack(ByteView ack, Micros now);
  Micros next_timeout() const noexcept;
  void on_timeout(Micros now);

  bool done() const noexcept { return next_ == chunks_.size() && !outstanding_; }
  bool failed() const noexcept { return failed_; }
  Micros rtt_estimate() const noexcept { return rtt_; }
  const ArqStats& stats() const noexcept { return stats_; }
  std::size_t chunk_size() const noexcept { return chunk_size_; }

 private:
  Bytes frame(std::size_t index) const;

  std::size_t chunk_size_;
  std::size_t max_tries_;
  std::deque<Bytes> chunks_;
  std::size_t next_ = 0;       // index of the chunk awaiting (or next to send)
  bool outstanding_ = false;   // chunk next_ is in flight
  bool resend_due_ = false;
  std::size_t tries_ = 0;
  Micros sent_at_{0};
  Micros rtt_;
  bool failed_ = false;
  ArqStats stats_;
};

/// Delivers frames in sequence, acknowledging every frame it sees.
class StopAndWaitReceiver {
 public:
  /// Returns the ack to send back; nullopt for an unparseable frame.
  std::optional<Bytes> on_frame(ByteView frame);

  const Bytes& received() const noexcept { return data_; }
  std::uint64_t duplicates() const noexcept { return duplicates_; }

 private:
  std::uint32_t expected_ = 0;
  Bytes data_;
  std::uint64_t duplicates_ = 0;
};

}  // namespace spacelink::endpoints
