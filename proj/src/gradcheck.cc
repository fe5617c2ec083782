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

#include "maskq/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "maskq/errors.h"
#include "maskq/random.h"

namespace maskq {

GradCheckResult GradientCheck(QNetwork& online, const QNetwork& target,
                              std::span<const Transition> batch,
                              const LossOptions& loss, const GradCheckOptions& options) {
  if (options.probe_count < 1) throw DomainError("probe_count must be >= 1");

  ParamSet grads = online.params().ZerosLike();
  BiTaskLoss(online, target, batch, loss, &grads);

  ParamSet& params = online.params();
  const std::size_t total = params.ParameterCount();
  Rng rng(options.seed);
  GradCheckResult result;
  for (int p = 0; p < options.probe_count; ++p) {
    const auto flat = static_cast<std::size_t>(
        rng.UniformInt(0, static_cast<int>(total) - 1));
    double& theta = params.At(flat);
    const double saved = theta;
    theta = saved + options.step;
    const double up = BiTaskLoss(online, target, batch, loss, nullptr).total;
    theta = saved - options.step;
    const double down = BiTaskLoss(online, target, batch, loss, nullptr).total;
    theta = saved;

    const double numeric = (up - down) / (2.0 * options.step);
    const double analytic = grads.At(flat);
    const double denom =
        std::max({std::abs(analytic), std::abs(numeric), options.abs_floor});
    const double rel = std::abs(analytic - numeric) / denom;
    if (rel > result.max_relative_error || result.probes == 0) {
      result.max_relative_error = rel;
      result.worst_parameter = params.Describe(flat);
      result.worst_analytic = analytic;
      result.worst_numeric = numeric;
    }
    ++result.probes;
  }
  return result;
}

}  // namespace maskq
