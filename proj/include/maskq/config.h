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

#ifndef MASKQ_CONFIG_H_
#define MASKQ_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maskq/encode.h"
#include "maskq/env.h"
#include "maskq/qnet.h"

namespace maskq {

struct TrainConfig {
  int episodes = 2000;
  double gamma = 0.99;
  double lambda = 0.02;
  int batch_size = 512;
  double learning_rate = 1e-5;
  int target_sync_interval = 1000;  // env steps
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  // Fraction of the run over which epsilon decays linearly.
  double epsilon_decay_fraction = 0.5;
  double alpha_lo = 0.0;
  double alpha_hi = 0.48;
  int reward_preset = 1;
  std::uint64_t seed = 0;
  std::size_t buffer_capacity = 100000;
  int train_every = 1;    // env steps per gradient step
  int warmup_steps = 0;   // extra transitions required before learning
  double reward_scale = 1.0;
  bool verbose = true;
  ModelConfig model;
};

void ValidateTrainConfig(const TrainConfig& config);

struct EvalOptions {
  int episodes = 100;
  double alpha = 0.0;
  std::uint64_t seed = 1000;
  int trials = 100;
  int noise_runs = 400;
};

struct RunConfig {
  EnvConfig env;
  TrainConfig train;
  EvalOptions eval;
  std::string output_dir = "runs";
};

void ValidateRunConfig(const RunConfig& config);

// Defaults, with output_dir taken from $MASKQ_OUT_DIR when set.
RunConfig DefaultRunConfig();

// Reads INI-style text: [env], [train], [model], [eval], [run] sections with
// `key = value` lines. Unknown sections or keys raise ParseError naming the
// key. A [ranges] section is accepted only when `ranges` is non-null.
RunConfig ParseConfigText(const std::string& text, FeatureRanges* ranges = nullptr);
// File variant plus "key=value" or "section.key=value" overrides, applied
// after the file. The result is validated.
RunConfig ParseConfig(const std::string& path, const std::vector<std::string>& overrides = {});
void ApplyOverride(RunConfig& config, const std::string& assignment);

// Full effective config; ParseConfigText(FormatConfig(c)) == c.
std::string FormatConfig(const RunConfig& config);
std::string FormatRanges(const FeatureRanges& ranges);

// All "section.key" names, in echo order.
std::vector<std::string> ConfigKeys();

}  // namespace maskq

#endif  // MASKQ_CONFIG_H_
