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

#include <limits>
#include <optional>
#include <variant>

#include "spacelink/quic/types.hpp"

namespace spacelink::quic {

/// NewReno window management.
class NewReno {
 public:
  struct Acked {
    std::size_t bytes = 0;
    std::optional<std::uint64_t> pn;  // packets sent before recovery started do not grow the window
  };
  struct LossEvent {
    std::uint64_t largest_lost_pn = 0;
    std::uint64_t largest_sent_pn = 0;
  };
  struct PtoFired {};
  using Event = std::variant<Acked, LossEvent, PtoFired>;

  explicit NewReno(std::size_t mss = kMss, std::size_t initial_window = 10 * kMss);

  /// Applies one event and returns the new congestion window.
  std::size_t on_event(const Event& event);

  void on_packet_sent(std::size_t bytes) noexcept { bytes_in_flight_ += bytes; }
  /// Acked or declared lost; removes from flight only.
  void on_packet_removed(std::size_t bytes) noexcept;

  bool can_send(std::size_t bytes) const noexcept { return bytes_in_flight_ + bytes <= cwnd_; }
  std::size_t available() const noexcept { return cwnd_ > bytes_in_flight_ ? cwnd_ - bytes_in_flight_ : 0; }

  std::size_t cwnd() const noexcept { return cwnd_; }
  std::size_t ssthresh() const noexcept { return ssthresh_; }
  std::size_t bytes_in_flight() const noexcept { return bytes_in_flight_; }
  std::size_t min_window() const noexcept { return 2 * mss_; }
  std::optional<std::uint64_t> recovery_start_pn() const noexcept { return recovery_start_pn_; }
  std::uint64_t congestion_events() const noexcept { return congestion_events_; }
  std::uint64_t pto_events() const noexcept { return pto_events_; }

  static constexpr std::size_t kSerializedSize = 4 * 8;

 private:
  std::size_t mss_;
  std::size_t cwnd_;
  std::size_t ssthresh_ = std::numeric_limits<std::size_t>::max();
  std::size_t bytes_in_flight_ = 0;
  std::size_t avoidance_credit_ = 0;
  std::optional<std::uint64_t> recovery_start_pn_;
  std::uint64_t congestion_events_ = 0;
  std::uint64_t pto_events_ = 0;
};

}  // namespace spacelink::quic
