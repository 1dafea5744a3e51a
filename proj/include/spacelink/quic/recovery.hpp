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

#include <map>
#include <optional>
#include <vector>

#include "spacelink/quic/frame.hpp"

namespace spacelink::quic {

inline constexpr std::uint64_t kPacketThreshold = 3;
// Time threshold multiplier, 9/8.
inline constexpr std::int64_t kTimeThresholdNum = 9;
inline constexpr std::int64_t kTimeThresholdDen = 8;

/// Inclusive packet-number interval.
struct PacketRange {
  std::uint64_t smallest = 0;
  std::uint64_t largest = 0;
  bool operator==(const PacketRange&) const = default;
};

/// Expands an ACK frame into descending ranges. Throws MalformedAck when a
/// range would cover packet numbers below zero.
std::vector<PacketRange> ack_ranges(const AckFrame& ack);

/// Inverse of ack_ranges for descending, non-adjacent ranges. Keeps at most
/// `max_ranges` and clips any range longer than the u16 fields can express.
AckFrame build_ack(std::span<const PacketRange> descending, std::uint32_t ack_delay_us, std::size_t max_ranges = 32);

/// Smoothed RTT with the usual 1/8 and 1/4 EWMA gains.
class RttEstimator {
 public:
  explicit RttEstimator(Micros initial_rtt = 100_ms);

  void on_sample(Micros latest_rtt, Micros ack_delay, Micros max_ack_delay);

  bool has_sample() const noexcept { return has_sample_; }
  Micros smoothed() const noexcept { return smoothed_; }
  Micros variation() const noexcept { return variation_; }
  Micros min_rtt() const noexcept { return min_; }
  Micros latest() const noexcept { return latest_; }

  /// srtt + 4 rttvar + max_ack_delay.
  Micros pto_base(Micros max_ack_delay) const noexcept;
  /// 9/8 * max(srtt, latest_rtt).
  Micros loss_delay() const noexcept;

  static constexpr std::size_t kSerializedSize = 4 * 8;

 private:
  bool has_sample_ = false;
  Micros smoothed_;
  Micros variation_;
  Micros min_{0};
  Micros latest_{0};
};

struct SentPacket {
  std::uint64_t pn = 0;
  std::size_t bytes = 0;
  Micros time_sent{0};
  bool ack_eliciting = true;
  bool in_flight = true;
  bool zero_rtt = false;
  std::vector<Frame> frames;  // kept only for what may need resending

  /// pn(8) bytes(2) time(8) flags(1) plus the encoded retained frames.
  std::size_t footprint() const;
};

struct AckOutcome {
  std::vector<SentPacket> newly_acked;
  std::vector<SentPacket> lost;
  bool rtt_sampled = false;
};

/// Sent-packet ledger plus ACK-driven loss detection.
///
/// A packet is lost once some later packet is acknowledged and either it
/// trails the largest acknowledged by kPacketThreshold, or it has been
/// outstanding for the time threshold.
class LossRecovery {
 public:
  explicit LossRecovery(Micros initial_rtt = 100_ms, Micros max_ack_delay = 25_ms);

  void on_packet_sent(SentPacket packet);

  /// `largest_sent` bounds what the peer may acknowledge; throws MalformedAck.
  /// An ACK that acknowledges nothing new takes no RTT sample and declares no loss.
  AckOutcome on_ack(const AckFrame& ack, Micros now, std::optional<std::uint64_t> largest_sent);

  /// An RTT sample taken outside the ledger (e.g. the handshake round trip).
  void on_rtt_sample(Micros latest_rtt) { rtt_.on_sample(latest_rtt, Micros{0}, max_ack_delay_); }

  /// Runs the time-threshold check when the loss timer expires.
  std::vector<SentPacket> on_loss_timeout(Micros now);

  /// Removes every 0-RTT packet (the server refused early data).
  std::vector<SentPacket> take_zero_rtt();

  std::optional<Micros> loss_time() const noexcept { return loss_time_; }
  std::optional<std::uint64_t> largest_acked() const noexcept { return largest_acked_; }
  const RttEstimator& rtt() const noexcept { return rtt_; }
  const std::map<std::uint64_t, SentPacket>& ledger() const noexcept { return ledger_; }
  bool has_ack_eliciting_in_flight() const noexcept;
  std::optional<Micros> last_ack_eliciting_sent() const noexcept { return last_ack_eliciting_; }
  std::size_t ledger_footprint() const;

 private:
  std::vector<SentPacket> detect_lost(Micros now);

  RttEstimator rtt_;
  Micros max_ack_delay_;
  std::map<std::uint64_t, SentPacket> ledger_;
  std::optional<std::uint64_t> largest_acked_;
  std::optional<Micros> loss_time_;
  std::optional<Micros> last_ack_eliciting_;
};

/// Receive-side packet-number tracking: duplicate detection and ACK content.
class ReceivedPackets {
 public:
  explicit ReceivedPackets(std::size_t max_ranges = 64) : max_ranges_(max_ranges) {}

  /// True for packet numbers already seen or older than every retained range.
  bool contains(std::uint64_t pn) const;
  void insert(std::uint64_t pn, bool ack_eliciting, Micros now, Micros max_ack_delay);

  bool empty() const noexcept { return ranges_.empty(); }
  /// ACK wanted now: `threshold` ack-eliciting packets queued, or the delay timer expired.
  bool ack_needed(Micros now, std::size_t threshold) const noexcept;
  /// Any ack-eliciting packet received since the last ACK was sent.
  bool has_unacked() const noexcept { return ack_eliciting_unacked_ > 0; }
  std::optional<Micros> ack_deadline() const noexcept { return ack_deadline_; }

  AckFrame make_ack(Micros now, std::size_t max_ranges = 32) const;
  void on_ack_sent() noexcept;

  std::vector<PacketRange> ranges_descending() const;
  std::size_t footprint() const noexcept { return 8 + 8 + 16 * ranges_.size(); }

 private:
  std::size_t max_ranges_;
  std::map<std::uint64_t, std::uint64_t> ranges_;  // smallest -> largest
  std::uint64_t floor_ = 0;
  Micros largest_received_at_{0};
  std::size_t ack_eliciting_unacked_ = 0;
  std::optional<Micros> ack_deadline_;
};

}  // namespace spacelink::quic
