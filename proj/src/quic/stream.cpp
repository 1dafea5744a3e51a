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

#include "spacelink/quic/stream.hpp"

namespace spacelink::quic {

void SendStream::write(ByteView data, bool fin) {
  if (fin_requested_) throw Error(Errc::StreamFinished, "stream " + std::to_string(id_));
  if (pending_offset_ > 0 && pending_offset_ == pending_.size()) {
    pending_.clear();
    pending_offset_ = 0;
  }
  pending_.insert(pending_.end(), data.begin(), data.end());
  fin_requested_ = fin;
}

std::optional<StreamFrame> SendStream::next_frame(std::size_t max_encoded) {
  if (!has_pending() || max_encoded < kStreamFrameOverhead) return std::nullopt;
  if (pending_bytes() > 0 && max_encoded == kStreamFrameOverhead) return std::nullopt;
  const auto room = std::min<std::size_t>(max_encoded - kStreamFrameOverhead, 0xffff);
  const auto take = std::min(room, pending_bytes());
  StreamFrame f;
  f.stream_id = id_;
  f.offset = send_offset_;
  f.data.assign(pending_.begin() + static_cast<std::ptrdiff_t>(pending_offset_),
                pending_.begin() + static_cast<std::ptrdiff_t>(pending_offset_ + take));
  pending_offset_ += take;
  send_offset_ += take;
  if (fin_requested_ && pending_bytes() == 0) {
    f.fin = true;
    fin_sent_ = true;
  }
  if (pending_offset_ == pending_.size()) {
    pending_.clear();
    pending_offset_ = 0;
  } else if (pending_offset_ > (1u << 16)) {
    pending_.erase(pending_.begin(), pending_.begin() + static_cast<std::ptrdiff_t>(pending_offset_));
    pending_offset_ = 0;
  }
  return f;
}

RecvStream::Delivery RecvStream::on_frame(const StreamFrame& frame) {
  const auto end = frame.offset + frame.data.size();
  if (frame.fin) {
    if (final_size_ && *final_size_ != end) throw Error(Errc::MalformedFrame, "final size changed");
    final_size_ = end;
  }
  if (final_size_ && end > *final_size_) throw Error(Errc::MalformedFrame, "data beyond final size");

  if (end > delivered_ && !frame.data.empty()) {
    const auto skip = delivered_ > frame.offset ? delivered_ - frame.offset : 0;
    const auto start = frame.offset + skip;
    auto& slot = segments_[start];
    if (frame.data.size() - skip > slot.size()) {
      slot.assign(frame.data.begin() + static_cast<std::ptrdiff_t>(skip), frame.data.end());
    }
  }

  Delivery out;
  for (auto it = segments_.begin(); it != segments_.end() && it->first <= delivered_;) {
    const auto seg_end = it->first + it->second.size();
    if (seg_end > delivered_) {
      const auto skip = delivered_ - it->first;
      out.data.insert(out.data.end(), it->second.begin() + static_cast<std::ptrdiff_t>(skip), it->second.end());
      delivered_ = seg_end;
    }
    it = segments_.erase(it);
  }
  if (final_size_ && delivered_ == *final_size_ && !fin_delivered_) {
    fin_delivered_ = true;
    out.fin = true;
  }
  return out;
}

std::size_t RecvStream::footprint() const noexcept {
  std::size_t total = 4 + 8 + 8 + 1;
  for (const auto& [offset, data] : segments_) total += 8 + data.size();
  return total;
}

}  // namespace spacelink::quic
