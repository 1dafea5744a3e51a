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

#include "spacelink/endpoints/arq.hpp"

#include <algorithm>

namespace spacelink::endpoints {

StopAndWaitSender::StopAndWaitSender(Micros initial_rtt, std::size_t chunk_size, std::size_t max_tries)
    : chunk_size_(chunk_size), max_tries_(max_tries), rtt_(initial_rtt) {
  if (chunk_size == 0 || max_tries == 0) throw Error(Errc::InvalidConfig, "stop-and-wait chunk size and tries must be > 0");
}

void StopAndWaitSender::submit(ByteView data) {
  for (std::size_t off = 0; off < data.size(); off += chunk_size_) {
    const auto n = std::min(chunk_size_, data.size() - off);
    chunks_.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(off),
                         data.begin() + static_cast<std::ptrdiff_t>(off + n));
  }
}

Bytes StopAndWaitSender::frame(std::size_t index) const {
  Bytes out;
  ByteWriter w(out);
  w.u32(static_cast<std::uint32_t>(index));
  w.bytes(chunks_[index]);
  return out;
}

std::optional<Bytes> StopAndWaitSender::poll(Micros now) {
  if (failed_) return std::nullopt;
  if (outstanding_ && !resend_due_) return std::nullopt;
  if (!outstanding_) {
    if (next_ >= chunks_.size()) return std::nullopt;
    outstanding_ = true;
    tries_ = 0;
  } else {
    ++stats_.retransmissions;
  }
  resend_due_ = false;
  ++tries_;
  sent_at_ = now;
  ++stats_.frames_sent;
  return frame(next_);
}

void StopAndWaitSender::on_ack(ByteView ack, Micros now) {
  if (ack.size() != kArqHeaderSize) return;
  ++stats_.acks_received;
  const auto seq = load_be32(ack.data());
  if (!outstanding_ || seq != next_) {
    ++stats_.stale_acks;
    return;
  }
  if (tries_ == 1) rtt_ = (7 * rtt_ + (now - sent_at_)) / 8;  // sample only unambiguous round trips
  outstanding_ = false;
  resend_due_ = false;
  ++next_;
}

Micros StopAndWaitSender::next_timeout() const noexcept {
  if (!outstanding_ || resend_due_ || failed_) return kNever;
  return sent_at_ + 2 * rtt_;
}

void StopAndWaitSender::on_timeout(Micros now) {
  if (now < next_timeout()) return;
  if (tries_ >= max_tries_) {
    failed_ = true;
    outstanding_ = false;
    return;
  }
  resend_due_ = true;
}

std::optional<Bytes> StopAndWaitReceiver::on_frame(ByteView frame) {
  if (frame.size() < kArqHeaderSize) return std::nullopt;
  const auto seq = load_be32(frame.data());
  if (seq == expected_) {
    data_.insert(data_.end(), frame.begin() + kArqHeaderSize, frame.end());
    ++expected_;
  } else {
    ++duplicates_;
  }
  Bytes ack;
  ByteWriter(ack).u32(seq);
  return ack;
}

}  // namespace spacelink::endpoints
