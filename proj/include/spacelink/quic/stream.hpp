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

#include "spacelink/quic/frame.hpp"

namespace spacelink::quic {

class SendStream {
 public:
  explicit SendStream(std::uint32_t id) : id_(id) {}

  /// Throws StreamFinished once fin has been written.
  void write(ByteView data, bool fin);

  bool has_pending() const noexcept { return pending_offset_ < pending_.size() || (fin_requested_ && !fin_sent_); }
  /// Cuts the next frame whose encoding fits in `max_encoded` bytes.
  std::optional<StreamFrame> next_frame(std::size_t max_encoded);

  std::uint32_t id() const noexcept { return id_; }
  std::uint64_t send_offset() const noexcept { return send_offset_; }
  std::size_t pending_bytes() const noexcept { return pending_.size() - pending_offset_; }
  bool finished() const noexcept { return fin_requested_; }
  std::size_t footprint() const noexcept { return 4 + 8 + 1 + pending_bytes(); }

 private:
  std::uint32_t id_;
  Bytes pending_;
  std::size_t pending_offset_ = 0;
  std::uint64_t send_offset_ = 0;
  bool fin_requested_ = false;
  bool fin_sent_ = false;
};

/// In-order reassembly; each byte is released exactly once.
class RecvStream {
 public:
  struct Delivery {
    Bytes data;
    bool fin = false;
  };

  /// Returns the bytes that became contiguous (possibly empty) and whether the
  /// stream just completed. Throws MalformedFrame on a conflicting final size.
  Delivery on_frame(const StreamFrame& frame);

  std::uint64_t delivered_offset() const noexcept { return delivered_; }
  bool finished() const noexcept { return fin_delivered_; }
  std::size_t footprint() const noexcept;

 private:
  std::map<std::uint64_t, Bytes> segments_;
  std::uint64_t delivered_ = 0;
  std::optional<std::uint64_t> final_size_;
  bool fin_delivered_ = false;
};

}  // namespace spacelink::quic
