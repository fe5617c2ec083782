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

#ifndef MASKQ_ADAM_H_
#define MASKQ_ADAM_H_

#include <cstdint>

#include "maskq/params.h"

namespace maskq {

struct AdamOptions {
  double learning_rate = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct OptimizerState {
  AdamOptions options;
  ParamSet m;  // first moments, shaped like the parameters
  ParamSet v;  // second moments
  std::int64_t step = 0;

  static OptimizerState For(const ParamSet& params, const AdamOptions& options);
};

// Bias-corrected Adam update. All gradients are checked before anything is
// written; a non-finite entry raises TrainingError naming its tensor and
// leaves params and state untouched.
void AdamStep(ParamSet& params, const ParamSet& grads, OptimizerState& state);

}  // namespace maskq

#endif  // MASKQ_ADAM_H_
