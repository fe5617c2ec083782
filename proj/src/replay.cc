// Copyright 2026 The maskq Authors.
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

#include "maskq/replay.h"

#include <string>

#include "maskq/errors.h"

namespace maskq {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay capacity must be >= 1");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::Push(const Transition& t) {
  if (items_.size() < capacity_) {
    items_.push_back(t);
  } else {
    items_[cursor_] = t;
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<Transition> ReplayBuffer::Sample(std::size_t n, Rng& rng) const {
  if (n == 0 || items_.size() < n) {
    throw StateError("cannot sample " + std::to_string(n) + " transitions from a buffer of " +
                     std::to_string(items_.size()));
  }
  std::vector<Transition> out;
  out.reserve(n);
  const int last = static_cast<int>(items_.size()) - 1;
  for (std::size_t i = 0; i < n; ++i) out.push_back(items_[rng.UniformInt(0, last)]);
  return out;
}

}  // namespace maskq
