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
#ifndef MASKQ_TRAIN_H_
#define MASKQ_TRAIN_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "maskq/checkpoint.h"
#include "maskq/config.h"
#include "maskq/encode.h"
#include "maskq/env.h"
#include "maskq/qnet.h"
#include "maskq/random.h"

namespace maskq {

// Independent random streams derived from one run seed.
enum Stream : std::uint64_t {
  kStreamEnv = 1,
  kStreamMask = 2,
  kStreamExplore = 3,
  kStreamReplay = 4,
  kStreamInit = 5,
  kStreamNoise = 6,
  kStreamPolicy = 7,
};

// Weather seed of episode `index` for a run seeded with `run_seed`.
std::uint64_t EpisodeSeed(const EnvConfig& env, std::uint64_t run_seed, std::uint64_t index);

// Index of the largest value; ties go to the lowest index.
int GreedyAction(const std::array<double, kNumActions>& q_values);

// With probability epsilon a uniform action, otherwise the greedy one. One
// uniform draw is always consumed to decide.
int SelectAction(const QNetwork& net, const TokenSequence& obs, double epsilon, Rng& rng);

// Linear decay from epsilon_start to epsilon_end over the first
// epsilon_decay_fraction of the episodes.
double EpsilonAt(const TrainConfig& config, int episode);

struct EpisodeLog {
  int episode = 0;
  int steps = 0;
  double epsilon = 0.0;
  int updates = 0;
  double mean_td = 0.0;
  double mean_recon = 0.0;
  double mean_total = 0.0;
  std::array<double, kNumRewardPresets> rf{};
  double yield = 0.0;
  double n_total = 0.0;
  double w_total = 0.0;
  double leach_total = 0.0;
};

// Column order of the training log.
std::vector<std::string> TrainLogHeader();
std::vector<std::string> TrainLogRow(const EpisodeLog& row);

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<EpisodeLog> log;
};

// Runs DQN training. When out_dir is non-empty, writes config.ini,
// train_log.csv and final.ckpt there; a non-finite loss writes
// diagnostic.ckpt and throws TrainingError. Progress lines go to `progress`
// when it is non-null and config.train.verbose is set.
TrainResult Train(const RunConfig& config, const std::string& out_dir,
                  std::ostream* progress = nullptr);

}  // namespace maskq

#endif  // MASKQ_TRAIN_H_
