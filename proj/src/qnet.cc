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

#include "maskq/qnet.h"

#include "maskq/errors.h"

namespace maskq {

std::string ApproximatorName(Approximator kind) {
  return kind == Approximator::kMlp ? "mlp" : "transformer";
}

Approximator ParseApproximator(const std::string& name) {
  if (name == "transformer") return Approximator::kTransformer;
  if (name == "mlp") return Approximator::kMlp;
  throw ConfigError("approximator must be 'transformer' or 'mlp', got '" + name + "'");
}

void ValidateModelConfig(const ModelConfig& c) {
  if (c.kind == Approximator::kTransformer) {
    if (c.d_model < 1) throw ConfigError("d_model must be >= 1");
    if (c.layers < 0) throw ConfigError("layers must be >= 0");
    if (c.layers > 0) {
      if (c.heads < 1 || c.d_model % c.heads != 0) {
        throw ConfigError("heads must be >= 1 and divide d_model");
      }
      if (c.ffn < 1) throw ConfigError("ffn must be >= 1");
    }
  } else {
    if (c.mlp_hidden1 < 1 || c.mlp_hidden2 < 1) {
      throw ConfigError("mlp hidden widths must be >= 1");
    }
  }
}

NetOutput QNetwork::Forward(const TokenSequence& seq) const {
  return Forward(std::span<const TokenSequence>(&seq, 1)).front();
}

std::unique_ptr<QNetwork> MakeNetwork(const ModelConfig& config, std::uint64_t seed) {
  if (config.kind == Approximator::kMlp) return std::make_unique<MlpQNet>(config, seed);
  return std::make_unique<TransformerQNet>(config, seed);
}

std::unique_ptr<QNetwork> SyncTarget(const QNetwork& online) { return online.Clone(); }

}  // namespace maskq
