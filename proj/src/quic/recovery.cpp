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

#include "spacelink/quic/recovery.hpp"

#include <algorithm>

namespace spacelink::quic {

std::vector<PacketRange> ack_ranges(const AckFrame& ack) {
  std::vector<PacketRange> out;
  out.reserve(ack.ranges.size() + 1);
  if (ack.first_range > ack.largest) throw Error(Errc::MalformedAck, "first range below zero");
  PacketRange current{ack.largest - ack.first_range, ack.largest};
  out.push_back(current);
  for (auto [gap, range] : ack.ranges) {
    const std::uint64_t step = std::uint64_t{gap} + 2;
    if (current.smallest < step) throw Error(Errc::MalformedAck, "gap below zero");
    const auto largest = current.smallest - step;
    if (range > largest) throw Error(Errc::MalformedAck, "range below zero");
    current = PacketRange{largest - range, largest};
    out.push_back(current);
  }
  return out;
}

AckFrame build_ack(std::span<const PacketRange> descending, std::uint32_t ack_delay_us, std::size_t max_ranges) {
  AckFrame ack;
  ack.ack_delay_us = ack_delay_us;
  if (descending.empty()) return ack;
  max_ranges = std::min<std::size_t>({max_ranges, descending.size(), 256});
  const auto& top = descending[0];
  ack.largest = top.largest;
  ack.first_range = static_cast<std::uint16_t>(std::min<std::uint64_t>(top.largest - top.smallest, 0xffff));
  std::uint64_t prev_smallest = top.largest - ack.first_range;
  for (std::size_t i = 1; i < max_ranges; ++i) {
    const auto& r = descending[i];
    if (r.largest + 2 > prev_smallest) break;  // not representable (adjacent / overlapping)
    const auto gap = prev_smallest - r.largest - 2;
    if (gap > 0xffff) break;
    const auto len = std::min<std::uint64_t>(r.largest - r.smallest, 0xffff);
    ack.ranges.emplace_back(static_cast<std::uint16_t>(gap), static_cast<std::uint16_t>(len));
    prev_smallest = r.largest - len;
  }
  return ack;
}

RttEstimator::RttEstimator(Micros initial_rtt) : smoothed_(initial_rtt), variation_(initial_rtt / 2) {}

void RttEstimator::on_sample(Micros latest_rtt, Micros ack_delay, Micros max_ack_delay) {
  latest_ = latest_rtt;
  if (!has_sample_) {
    has_sample_ = true;
    min_ = latest_rtt;
    smoothed_ = latest_rtt;
    variation_ = latest_rtt / 2;
    return;
  }
  min_ = std::min(min_, latest_rtt);
  ack_delay = std::min(ack_delay, max_ack_delay);
  auto adjusted = latest_rtt;
  if (latest_rtt >= min_ + ack_delay) adjusted -= ack_delay;
  const auto diff = smoothed_ > adjusted ? smoothed_ - adjusted : adjusted - smoothed_;
  variation_ = (3 * variation_ + diff) / 4;
  smoothed_ = (7 * smoothed_ + adjusted) / 8;
}

Micros RttEstimator::pto_base(Micros max_ack_delay) const noexcept {
  return smoothed_ + 4 * variation_ + max_ack_delay;
}

Micros RttEstimator::loss_delay() const noexcept {
  return std::max(smoothed_, latest_) * kTimeThresholdNum / kTimeThresholdDen;
}

std::size_t SentPacket::footprint() const {
  std::size_t total = 8 + 2 + 8 + 1;
  for (const auto& f : frames) total += encoded_size(f);
  return total;
}

LossRecovery::LossRecovery(Micros initial_rtt, Micros max_ack_delay)
    : rtt_(initial_rtt), max_ack_delay_(max_ack_delay) {}

void LossRecovery::on_packet_sent(SentPacket packet) {
  if (packet.ack_eliciting) last_ack_eliciting_ = packet.time_sent;
  const auto pn = packet.pn;
  ledger_.insert_or_assign(pn, std::move(packet));
}

bool LossRecovery::has_ack_eliciting_in_flight() const noexcept {
  return std::any_of(ledger_.begin(), ledger_.end(),
                     [](const auto& kv) { return kv.second.ack_eliciting && kv.second.in_flight; });
}

AckOutcome LossRecovery::on_ack(const AckFrame& ack, Micros now, std::optional<std::uint64_t> largest_sent) {
  if (!largest_sent || ack.largest > *largest_sent) throw Error(Errc::MalformedAck, "acknowledges unsent packet");
  const auto ranges = ack_ranges(ack);

  AckOutcome out;
  for (const auto& r : ranges) {
    auto it = ledger_.lower_bound(r.smallest);
    while (it != ledger_.end() && it->first <= r.largest) {
      out.newly_acked.push_back(std::move(it->second));
      it = ledger_.erase(it);
    }
  }
  if (out.newly_acked.empty()) return out;

  largest_acked_ = std::max(largest_acked_.value_or(0), ack.largest);

  const auto& newest = *std::max_element(out.newly_acked.begin(), out.newly_acked.end(),
                                         [](const SentPacket& a, const SentPacket& b) { return a.pn < b.pn; });
  rtt_.on_sample(now - newest.time_sent, Micros(ack.ack_delay_us), max_ack_delay_);
  out.rtt_sampled = true;

  out.lost = detect_lost(now);
  return out;
}

std::vector<SentPacket> LossRecovery::detect_lost(Micros now) {
  std::vector<SentPacket> lost;
  loss_time_.reset();
  if (!largest_acked_) return lost;
  const auto loss_delay = rtt_.loss_delay();
  for (auto it = ledger_.begin(); it != ledger_.end() && it->first < *largest_acked_;) {
    const auto& p = it->second;
    if (*largest_acked_ - p.pn >= kPacketThreshold || now - p.time_sent >= loss_delay) {
      lost.push_back(std::move(it->second));
      it = ledger_.erase(it);
      continue;
    }
    const auto when = p.time_sent + loss_delay;
    loss_time_ = loss_time_ ? std::min(*loss_time_, when) : when;
    ++it;
  }
  return lost;
}

std::vector<SentPacket> LossRecovery::on_loss_timeout(Micros now) { return detect_lost(now); }

std::vector<SentPacket> LossRecovery::take_zero_rtt() {
  std::vector<SentPacket> out;
  for (auto it = ledger_.begin(); it != ledger_.end();) {
    if (it->second.zero_rtt) {
      out.push_back(std::move(it->second));
      it = ledger_.erase(it);
    } else {
      ++it;
    }
  }
  if (!has_ack_eliciting_in_flight()) loss_time_.reset();
  return out;
}

std::size_t LossRecovery::ledger_footprint() const {
  std::size_t total = 0;
  for (const auto& [pn, p] : ledger_) total += p.footprint();
  return total;
}

bool ReceivedPackets::contains(std::uint64_t pn) const {
  if (pn < floor_) return true;
  auto it = ranges_.upper_bound(pn);
  if (it == ranges_.begin()) return false;
  --it;
  return pn <= it->second;
}

void ReceivedPackets::insert(std::uint64_t pn, bool ack_eliciting, Micros now, Micros max_ack_delay) {
  if (contains(pn)) return;
  const bool is_largest = ranges_.empty() || pn > std::prev(ranges_.end())->second;
  std::uint64_t lo = pn;
  std::uint64_t hi = pn;
  auto next = ranges_.upper_bound(pn);
  if (next != ranges_.end() && next->first == pn + 1) {
    hi = next->second;
    next = ranges_.erase(next);
  }
  if (next != ranges_.begin()) {
    auto prev = std::prev(next);
    if (prev->second + 1 == pn) {
      lo = prev->first;
      ranges_.erase(prev);
    }
  }
  ranges_.emplace(lo, hi);
  while (ranges_.size() > max_ranges_) {
    ranges_.erase(ranges_.begin());
    floor_ = ranges_.begin()->first;
  }
  if (is_largest) largest_received_at_ = now;
  if (ack_eliciting) {
    ++ack_eliciting_unacked_;
    if (!ack_deadline_) ack_deadline_ = now + max_ack_delay;
  }
}

bool ReceivedPackets::ack_needed(Micros now, std::size_t threshold) const noexcept {
  if (ack_eliciting_unacked_ == 0) return false;
  return ack_eliciting_unacked_ >= threshold || (ack_deadline_ && now >= *ack_deadline_);
}

std::vector<PacketRange> ReceivedPackets::ranges_descending() const {
  std::vector<PacketRange> out;
  out.reserve(ranges_.size());
  for (auto it = ranges_.rbegin(); it != ranges_.rend(); ++it) out.push_back(PacketRange{it->first, it->second});
  return out;
}

AckFrame ReceivedPackets::make_ack(Micros now, std::size_t max_ranges) const {
  const auto ranges = ranges_descending();
  const auto delay = std::max<Micros::rep>(0, (now - largest_received_at_).count());
  return build_ack(ranges, static_cast<std::uint32_t>(std::min<Micros::rep>(delay, 0xffffffff)), max_ranges);
}

void ReceivedPackets::on_ack_sent() noexcept {
  ack_eliciting_unacked_ = 0;
  ack_deadline_.reset();
}

}  // namespace spacelink::quic
