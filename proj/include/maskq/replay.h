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

#ifndef MASKQ_REPLAY_H_
#define MASKQ_REPLAY_H_

#include <cstddef>
#include <vector>

#include "maskq/loss.h"
#include "maskq/random.h"

namespace maskq {

// Fixed-capacity ring of transitions; once full, Push overwrites the oldest.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void Push(const Transition& t);
  // n draws, uniform with replacement. Requires size() >= n.
  std::vector<Transition> Sample(std::size_t n, Rng& rng) const;

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t cursor() const { return cursor_; }
  // Slot i of the underlying storage.
  const Transition& at(std::size_t i) const { return items_.at(i); }

 private:
  std::vector<Transition> items_;
  std::size_t capacity_;
  std::size_t cursor_ = 0;
};

}  // namespace maskq

#endif  // MASKQ_REPLAY_H_
