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

#include "maskq/adam.h"

#include <cmath>

#include "maskq/errors.h"

namespace maskq {

OptimizerState OptimizerState::For(const ParamSet& params, const AdamOptions& options) {
  OptimizerState s;
  s.options = options;
  s.m = params.ZerosLike();
  s.v = params.ZerosLike();
  return s;
}

void AdamStep(ParamSet& params, const ParamSet& grads, OptimizerState& state) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw DomainError("optimizer shape mismatch");
  }
  for (int i = 0; i < grads.size(); ++i) {
    if (grads[i].value.rows() != params[i].value.rows() ||
        grads[i].value.cols() != params[i].value.cols()) {
      throw DomainError("gradient shape mismatch for '" + params[i].name + "'");
    }
    if (!grads[i].value.allFinite()) {
      throw TrainingError("non-finite gradient in '" + params[i].name + "'");
    }
  }

  const AdamOptions& o = state.options;
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(o.beta1, t);
  const double c2 = 1.0 - std::pow(o.beta2, t);
  for (int i = 0; i < params.size(); ++i) {
    auto g = grads[i].value.array();
    auto m = state.m[i].value.array();
    auto v = state.v[i].value.array();
    m = o.beta1 * m + (1.0 - o.beta1) * g;
    v = o.beta2 * v + (1.0 - o.beta2) * g.square();
    params[i].value.array() -=
        o.learning_rate * (m / c1) / ((v / c2).sqrt() + o.epsilon);
  }
}

}  // namespace maskq
