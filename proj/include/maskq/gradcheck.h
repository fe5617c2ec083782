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

#ifndef MASKQ_GRADCHECK_H_
#define MASKQ_GRADCHECK_H_

#include <cstdint>
#include <span>
#include <string>

#include "maskq/loss.h"

namespace maskq {

struct GradCheckOptions {
  int probe_count = 200;
  double step = 1e-4;
  // Denominator floor for the relative error; keeps exactly-zero gradients
  // from turning rounding noise into huge ratios.
  double abs_floor = 1e-5;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  int probes = 0;
};

// Compares analytic gradients of BiTaskLoss against central differences at
// randomly chosen parameters. `online` is perturbed and restored in place.
GradCheckResult GradientCheck(QNetwork& online, const QNetwork& target,
                              std::span<const Transition> batch,
                              const LossOptions& loss, const GradCheckOptions& options);

}  // namespace maskq

#endif  // MASKQ_GRADCHECK_H_
