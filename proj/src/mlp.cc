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

#include <cmath>

#include "maskq/errors.h"
#include "maskq/qnet.h"
#include "maskq/random.h"
#include "nn_ops.h"

namespace maskq {

MlpQNet::MlpQNet(const ModelConfig& config, std::uint64_t seed) : QNetwork(config) {
  ValidateModelConfig(config);
  Register();
  Rng rng(seed);
  auto fill = [&rng](Matrix& m) {
    const double stddev = 1.0 / std::sqrt(static_cast<double>(m.rows()));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Normal(0.0, stddev);
  };
  fill(params_[w1_].value);
  fill(params_[w2_].value);
  fill(params_[w3_].value);
}

void MlpQNet::Register() {
  const int h1 = config_.mlp_hidden1;
  const int h2 = config_.mlp_hidden2;
  constexpr int out = kNumActions + kNumFeatures;
  w1_ = params_.Add("mlp/w1", kNumFeatures, h1);
  b1_ = params_.Add("mlp/b1", 1, h1);
  w2_ = params_.Add("mlp/w2", h1, h2);
  b2_ = params_.Add("mlp/b2", 1, h2);
  w3_ = params_.Add("mlp/w3", h2, out);
  b3_ = params_.Add("mlp/b3", 1, out);
}

std::unique_ptr<QNetwork> MlpQNet::Clone() const { return std::make_unique<MlpQNet>(*this); }

Matrix MlpQNet::Inputs(std::span<const TokenSequence> batch) {
  Matrix x(static_cast<Eigen::Index>(batch.size()), kNumFeatures);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    ValidateTokens(batch[b]);
    for (int f = 0; f < kNumFeatures; ++f) {
      const int id = batch[b].ids[f + 1];
      if (id > kMaskToken || id == kClsToken || id == kSepToken) {
        throw DomainError("special token in a feature slot");
      }
      x(static_cast<Eigen::Index>(b), f) =
          id == kMaskToken ? kMlpMaskSentinel : id / static_cast<double>(kMaxValueToken);
    }
  }
  return x;
}

namespace {

std::vector<NetOutput> Unpack(const Matrix& y) {
  std::vector<NetOutput> out(static_cast<std::size_t>(y.rows()));
  for (Eigen::Index b = 0; b < y.rows(); ++b) {
    for (int a = 0; a < kNumActions; ++a) out[b].q_values[a] = y(b, a);
    for (int f = 0; f < kNumFeatures; ++f) out[b].recon[f] = y(b, kNumActions + f);
  }
  return out;
}

}  // namespace

std::vector<NetOutput> MlpQNet::Forward(std::span<const TokenSequence> batch) const {
  const Matrix x = Inputs(batch);
  Matrix h1 = x * params_[w1_].value;
  h1.rowwise() += params_[b1_].value.row(0);
  const Matrix g1 = nn::GeluMatrix(h1);
  Matrix h2 = g1 * params_[w2_].value;
  h2.rowwise() += params_[b2_].value.row(0);
  const Matrix g2 = nn::GeluMatrix(h2);
  Matrix y = g2 * params_[w3_].value;
  y.rowwise() += params_[b3_].value.row(0);
  return Unpack(y);
}

std::vector<NetOutput> MlpQNet::Backprop(std::span<const TokenSequence> batch,
                                         const LossGradFn& loss_grad,
                                         ParamSet& grads) const {
  const Matrix x = Inputs(batch);
  Matrix h1 = x * params_[w1_].value;
  h1.rowwise() += params_[b1_].value.row(0);
  const Matrix g1 = nn::GeluMatrix(h1);
  Matrix h2 = g1 * params_[w2_].value;
  h2.rowwise() += params_[b2_].value.row(0);
  const Matrix g2 = nn::GeluMatrix(h2);
  Matrix y = g2 * params_[w3_].value;
  y.rowwise() += params_[b3_].value.row(0);
  std::vector<NetOutput> outputs = Unpack(y);

  const std::vector<OutputGrad> dout = loss_grad(outputs);
  if (dout.size() != batch.size()) throw DomainError("loss gradient batch size mismatch");
  Matrix dy(y.rows(), y.cols());
  for (Eigen::Index b = 0; b < y.rows(); ++b) {
    for (int a = 0; a < kNumActions; ++a) dy(b, a) = dout[b].q_values[a];
    for (int f = 0; f < kNumFeatures; ++f) dy(b, kNumActions + f) = dout[b].recon[f];
  }

  grads[w3_].value.noalias() += g2.transpose() * dy;
  grads[b3_].value.row(0) += dy.colwise().sum();
  Matrix dh2 = dy * params_[w3_].value.transpose();
  dh2.array() *= h2.unaryExpr(&nn::GeluGrad).array();
  grads[w2_].value.noalias() += g1.transpose() * dh2;
  grads[b2_].value.row(0) += dh2.colwise().sum();
  Matrix dh1 = dh2 * params_[w2_].value.transpose();
  dh1.array() *= h1.unaryExpr(&nn::GeluGrad).array();
  grads[w1_].value.noalias() += x.transpose() * dh1;
  grads[b1_].value.row(0) += dh1.colwise().sum();
  return outputs;
}

}  // namespace maskq
