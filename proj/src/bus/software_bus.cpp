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

#include "spacelink/bus/software_bus.hpp"

namespace spacelink::bus {

SoftwareBus::Pipe& SoftwareBus::pipe_locked(PipeId id) {
  auto it = pipes_.find(id);
  if (it == pipes_.end()) throw Error(Errc::UnknownPipe, "pipe " + std::to_string(id.value));
  return it->second;
}

const SoftwareBus::Pipe& SoftwareBus::pipe_locked(PipeId id) const {
  auto it = pipes_.find(id);
  if (it == pipes_.end()) throw Error(Errc::UnknownPipe, "pipe " + std::to_string(id.value));
  return it->second;
}

PipeId SoftwareBus::create_pipe(const std::string& owner, std::size_t capacity) {
  if (capacity < 1) throw Error(Errc::InvalidCapacity, "pipe capacity must be >= 1");
  std::lock_guard lock(mutex_);
  for (const auto& [id, pipe] : pipes_) {
    if (pipe.owner == owner) throw Error(Errc::DuplicatePipeName, owner);
  }
  PipeId id{next_pipe_++};
  pipes_.emplace(id, Pipe{owner, capacity, {}, 0, 0});
  return id;
}

void SoftwareBus::close_pipe(PipeId pipe) {
  {
    std::lock_guard lock(mutex_);
    pipe_locked(pipe);
    pipes_.erase(pipe);
    for (auto it = routes_.begin(); it != routes_.end();) {
      it->second.erase(pipe);
      it = it->second.empty() ? routes_.erase(it) : std::next(it);
    }
  }
  arrived_.notify_all();
}

void SoftwareBus::subscribe(PipeId pipe, MessageId mid) {
  std::lock_guard lock(mutex_);
  pipe_locked(pipe);
  routes_[mid].insert(pipe);
}

void SoftwareBus::unsubscribe(PipeId pipe, MessageId mid) {
  std::lock_guard lock(mutex_);
  pipe_locked(pipe);
  auto it = routes_.find(mid);
  if (it == routes_.end()) return;
  it->second.erase(pipe);
  if (it->second.empty()) routes_.erase(it);
}

std::size_t SoftwareBus::publish(const BusMessage& msg) {
  std::size_t delivered = 0;
  {
    std::lock_guard lock(mutex_);
    ++publishes_;
    auto route = routes_.find(msg.mid);
    if (route == routes_.end() || route->second.empty()) {
      ++no_subscriber_;
      return 0;
    }
    for (auto id : route->second) {
      auto& pipe = pipes_.at(id);
      if (pipe.queue.size() >= pipe.capacity) {
        ++pipe.overflow_count;
        continue;
      }
      pipe.queue.push_back(msg);
      ++pipe.delivered;
      ++delivered;
    }
  }
  if (delivered > 0) arrived_.notify_all();
  return delivered;
}

std::optional<BusMessage> SoftwareBus::receive(PipeId pipe, Micros timeout) {
  std::unique_lock lock(mutex_);
  auto* p = &pipe_locked(pipe);
  if (p->queue.empty() && timeout > Micros{0}) {
    arrived_.wait_for(lock, timeout, [&] {
      auto it = pipes_.find(pipe);
      return it == pipes_.end() || !it->second.queue.empty();
    });
    p = &pipe_locked(pipe);
  }
  if (p->queue.empty()) return std::nullopt;
  auto msg = std::move(p->queue.front());
  p->queue.pop_front();
  return msg;
}

PipeStats SoftwareBus::stats(PipeId pipe) const {
  std::lock_guard lock(mutex_);
  const auto& p = pipe_locked(pipe);
  return PipeStats{p.owner, p.capacity, p.queue.size(), p.delivered, p.overflow_count};
}

std::size_t SoftwareBus::subscriber_count(MessageId mid) const {
  std::lock_guard lock(mutex_);
  auto it = routes_.find(mid);
  return it == routes_.end() ? 0 : it->second.size();
}

std::uint64_t SoftwareBus::no_subscriber_count() const {
  std::lock_guard lock(mutex_);
  return no_subscriber_;
}

std::uint64_t SoftwareBus::publish_count() const {
  std::lock_guard lock(mutex_);
  return publishes_;
}

}  // namespace spacelink::bus
