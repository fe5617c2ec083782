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
#ifndef MASKQ_CHECKPOINT_H_
#define MASKQ_CHECKPOINT_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "maskq/adam.h"
#include "maskq/config.h"
#include "maskq/encode.h"
#include "maskq/params.h"
#include "maskq/qnet.h"

namespace maskq {

inline constexpr char kCheckpointMagic[] = "CROPSCK1";
inline constexpr std::uint32_t kCheckpointVersion = 1;

// Everything needed to resume or evaluate a run. Doubles are stored as
// little-endian IEEE-754 binary64, so files are portable across platforms.
struct Checkpoint {
  RunConfig config;
  FeatureRanges ranges;
  std::vector<Tensor> online;
  std::vector<Tensor> target;
  AdamOptions adam;
  std::int64_t adam_step = 0;
  std::vector<Tensor> adam_m;
  std::vector<Tensor> adam_v;
  // (stream name, engine state) pairs.
  std::vector<std::pair<std::string, std::string>> rng_streams;
  std::int64_t train_steps = 0;
  std::int64_t episodes_done = 0;
};

std::string SerializeCheckpoint(const Checkpoint& ckpt);
// Validates magic, version, framing and shape table; throws FormatError on
// anything malformed.
Checkpoint DeserializeCheckpoint(const std::string& bytes);

// Writes to "<path>.tmp" and renames over `path`.
void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint LoadCheckpoint(const std::string& path);

// Builds the network declared by the checkpoint's config and loads the online
// weights into it.
std::unique_ptr<QNetwork> RestoreNetwork(const Checkpoint& ckpt);
// Loads the online weights into an existing network. Throws
// CompatibilityError naming the first tensor whose name or shape differs.
void LoadWeights(const Checkpoint& ckpt, QNetwork& net);

}  // namespace maskq

#endif  // MASKQ_CHECKPOINT_H_
