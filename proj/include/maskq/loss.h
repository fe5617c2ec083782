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

#ifndef MASKQ_LOSS_H_
#define MASKQ_LOSS_H_

#include <span>

#include "maskq/encode.h"
#include "maskq/qnet.h"

namespace maskq {

// One replayed step. The masks are frozen at collection time.
struct Transition {
  TokenSequence obs;           // masked current observation
  TargetVector full_targets{};  // unmasked current state in [0, 1]
  int action = 0;
  double reward = 0.0;         // unscaled reward under the training preset
  TokenSequence next_obs;      // masked next observation
  bool done = false;
};

struct LossOptions {
  double lambda = 0.02;
  double gamma = 0.99;
  // Multiplies rewards inside the TD target only; 1 leaves them unchanged.
  double reward_scale = 1.0;
};

struct LossResult {
  double td = 0.0;     // mean squared TD error
  double recon = 0.0;  // mean over the batch of the 25-feature MSE
  double total = 0.0;  // td + lambda * recon
};

// Bi-task DQN loss:
//   mean_b (r + gamma max_a' Q(s'; target) (1 - done) - Q(s, a))^2
//   + lambda mean_b MSE(full_targets, recon(s))
// Both networks see the masked observations. When `grads` is non-null the
// exact gradient with respect to `online` is accumulated into it; the target
// network never receives gradient.
LossResult BiTaskLoss(const QNetwork& online, const QNetwork& target,
                      std::span<const Transition> batch, const LossOptions& options,
                      ParamSet* grads);

}  // namespace maskq

#endif  // MASKQ_LOSS_H_
