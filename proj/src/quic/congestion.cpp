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

#include "spacelink/quic/congestion.hpp"

#include <algorithm>

namespace spacelink::quic {

NewReno::NewReno(std::size_t mss, std::size_t initial_window)
    : mss_(mss), cwnd_(std::max(initial_window, 2 * mss)) {}

void NewReno::on_packet_removed(std::size_t bytes) noexcept {
  bytes_in_flight_ = bytes > bytes_in_flight_ ? 0 : bytes_in_flight_ - bytes;
}

std::size_t NewReno::on_event(const Event& event) {
  if (const auto* acked = std::get_if<Acked>(&event)) {
    if (acked->pn && recovery_start_pn_ && *acked->pn <= *recovery_start_pn_) return cwnd_;
    if (cwnd_ < ssthresh_) {
      cwnd_ += acked->bytes;
    } else {
      // cwnd += MSS * acked / cwnd, carrying the remainder between acks.
      avoidance_credit_ += mss_ * acked->bytes;
      cwnd_ += avoidance_credit_ / cwnd_;
      avoidance_credit_ %= cwnd_;
    }
  } else if (const auto* loss = std::get_if<LossEvent>(&event)) {
    if (recovery_start_pn_ && loss->largest_lost_pn <= *recovery_start_pn_) return cwnd_;
    recovery_start_pn_ = loss->largest_sent_pn;
    ssthresh_ = cwnd_ / 2;
    cwnd_ = std::max(ssthresh_, min_window());
    avoidance_credit_ = 0;
    ++congestion_events_;
  } else {
    ++pto_events_;
  }
  return cwnd_;
}

}  // namespace spacelink::quic
