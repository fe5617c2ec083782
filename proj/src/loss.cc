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

#include "maskq/loss.h"

#include <algorithm>
#include <vector>

#include "maskq/errors.h"

namespace maskq {

LossResult BiTaskLoss(const QNetwork& online, const QNetwork& target,
                      std::span<const Transition> batch, const LossOptions& options,
                      ParamSet* grads) {
  if (batch.empty()) throw DomainError("bi-task loss needs a non-empty batch");
  if (options.lambda < 0) throw DomainError("lambda must be >= 0");
  if (options.gamma < 0 || options.gamma > 1) throw DomainError("gamma must be in [0, 1]");

  const std::size_t n = batch.size();
  std::vector<TokenSequence> obs(n), next_obs(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (batch[i].action < 0 || batch[i].action >= kNumActions) {
      throw DomainError("transition action out of range");
    }
    obs[i] = batch[i].obs;
    next_obs[i] = batch[i].next_obs;
  }

  const std::vector<NetOutput> next_q = target.Forward(next_obs);
  std::vector<double> td_target(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double best =
        *std::max_element(next_q[i].q_values.begin(), next_q[i].q_values.end());
    td_target[i] = options.reward_scale * batch[i].reward +
                   (batch[i].done ? 0.0 : options.gamma * best);
  }

  LossResult result;
  const double inv_n = 1.0 / static_cast<double>(n);
  auto score = [&](const std::vector<NetOutput>& out) {
    std::vector<OutputGrad> dout(n);
    double td = 0.0, recon = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const int a = batch[i].action;
      const double residual = td_target[i] - out[i].q_values[a];
      td += residual * residual;
      dout[i].q_values[a] = -2.0 * residual * inv_n;
      double mse = 0.0;
      for (int f = 0; f < kNumFeatures; ++f) {
        const double e = batch[i].full_targets[f] - out[i].recon[f];
        mse += e * e;
        dout[i].recon[f] = -2.0 * options.lambda * e * inv_n / kNumFeatures;
      }
      recon += mse / kNumFeatures;
    }
    result.td = td * inv_n;
    result.recon = recon * inv_n;
    result.total = result.td + options.lambda * result.recon;
    return dout;
  };

  if (grads != nullptr) {
    online.Backprop(obs, score, *grads);
  } else {
    score(online.Forward(obs));
  }
  return result;
}

}  // namespace maskq
