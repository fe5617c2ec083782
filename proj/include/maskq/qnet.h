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

#ifndef MASKQ_QNET_H_
#define MASKQ_QNET_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "maskq/encode.h"
#include "maskq/params.h"

namespace maskq {

enum class Approximator { kTransformer, kMlp };

std::string ApproximatorName(Approximator kind);
Approximator ParseApproximator(const std::string& name);

struct ModelConfig {
  Approximator kind = Approximator::kTransformer;
  // Transformer encoder.
  int d_model = 64;
  int layers = 2;
  int heads = 4;
  int ffn = 128;
  // MLP baseline: 25 -> hidden1 -> hidden2 -> 25 + 25.
  int mlp_hidden1 = 512;
  int mlp_hidden2 = 256;
};

void ValidateModelConfig(const ModelConfig& config);

// Input value fed to the MLP for a masked feature slot.
inline constexpr double kMlpMaskSentinel = -1.0;

struct NetOutput {
  std::array<double, kNumActions> q_values{};
  std::array<double, kNumFeatures> recon{};
};

// dLoss/dOutput for one sample.
struct OutputGrad {
  std::array<double, kNumActions> q_values{};
  std::array<double, kNumFeatures> recon{};
};

// Bi-task approximator: action values plus per-feature reconstruction.
// Forward passes are const and may run concurrently; parameter mutation goes
// through params() and must be exclusive.
class QNetwork {
 public:
  using LossGradFn =
      std::function<std::vector<OutputGrad>(const std::vector<NetOutput>&)>;

  virtual ~QNetwork() = default;

  virtual std::vector<NetOutput> Forward(std::span<const TokenSequence> batch) const = 0;
  NetOutput Forward(const TokenSequence& seq) const;

  // Forward pass, then `loss_grad` maps the outputs to output gradients, which
  // are back-propagated and accumulated (+=) into `grads`.
  virtual std::vector<NetOutput> Backprop(std::span<const TokenSequence> batch,
                                          const LossGradFn& loss_grad,
                                          ParamSet& grads) const = 0;

  virtual std::unique_ptr<QNetwork> Clone() const = 0;

  const ModelConfig& config() const { return config_; }
  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

 protected:
  explicit QNetwork(const ModelConfig& config) : config_(config) {}

  ModelConfig config_;
  ParamSet params_;
};

// Randomly initialized network of the configured kind.
std::unique_ptr<QNetwork> MakeNetwork(const ModelConfig& config, std::uint64_t seed);

// Target network: an independent deep copy of the parameters.
std::unique_ptr<QNetwork> SyncTarget(const QNetwork& online);

// Pre-norm transformer encoder over the 27-token sequence. The Q head reads
// the [CLS] position; a shared scalar head reads each feature position. With
// zero layers the model is embeddings followed directly by the heads (no
// final layer norm), i.e. linear in its parameters.
class TransformerQNet : public QNetwork {
 public:
  TransformerQNet(const ModelConfig& config, std::uint64_t seed);

  std::vector<NetOutput> Forward(std::span<const TokenSequence> batch) const override;
  std::vector<NetOutput> Backprop(std::span<const TokenSequence> batch,
                                  const LossGradFn& loss_grad,
                                  ParamSet& grads) const override;
  std::unique_ptr<QNetwork> Clone() const override;

 private:
  struct LayerIds {
    int ln1_gain, ln1_bias, wq, bq, wk, bk, wv, bv, wo, bo;
    int ln2_gain, ln2_bias, w1, b1, w2, b2;
  };
  struct Cache;

  void Register();
  void Run(std::span<const TokenSequence> batch, Cache& cache) const;

  int token_embed_ = 0;
  int pos_embed_ = 0;
  std::vector<LayerIds> layers_;
  int final_gain_ = -1;
  int final_bias_ = -1;
  int q_w_ = 0, q_b_ = 0, r_w_ = 0, r_b_ = 0;
};

// Plain feed-forward baseline over the 25 normalized values (masked slots set
// to kMlpMaskSentinel).
class MlpQNet : public QNetwork {
 public:
  MlpQNet(const ModelConfig& config, std::uint64_t seed);

  std::vector<NetOutput> Forward(std::span<const TokenSequence> batch) const override;
  std::vector<NetOutput> Backprop(std::span<const TokenSequence> batch,
                                  const LossGradFn& loss_grad,
                                  ParamSet& grads) const override;
  std::unique_ptr<QNetwork> Clone() const override;

  static Matrix Inputs(std::span<const TokenSequence> batch);

 private:
  void Register();

  int w1_ = 0, b1_ = 0, w2_ = 0, b2_ = 0, w3_ = 0, b3_ = 0;
};

}  // namespace maskq

#endif  // MASKQ_QNET_H_
