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
#include <string>

#include "maskq/errors.h"
#include "maskq/qnet.h"
#include "maskq/random.h"
#include "nn_ops.h"

namespace maskq {
namespace {

constexpr int kT = kSeqLen;

void FillNormal(Matrix& m, double stddev, Rng& rng) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.Normal(0.0, stddev);
}

}  // namespace

// Activations kept for the backward pass. Rows are (sample, position) pairs,
// sample-major: row b * 27 + t.
struct TransformerQNet::Cache {
  struct Layer {
    Matrix x_in, a, xhat1, q, k, v, o, x1, b, xhat2, h, g;
    Eigen::VectorXd rstd1, rstd2;
    std::vector<Matrix> probs;  // one T x T matrix per (sample, head)
  };
  int batch = 0;
  std::vector<Layer> layers;
  Matrix z, zhat;
  Eigen::VectorXd zrstd;
  std::vector<NetOutput> outputs;
};

TransformerQNet::TransformerQNet(const ModelConfig& config, std::uint64_t seed)
    : QNetwork(config) {
  ValidateModelConfig(config);
  Register();
  Rng rng(seed);
  const double d = config_.d_model;
  FillNormal(params_[token_embed_].value, 0.1, rng);
  FillNormal(params_[pos_embed_].value, 0.1, rng);
  for (const LayerIds& ids : layers_) {
    params_[ids.ln1_gain].value.setOnes();
    params_[ids.ln2_gain].value.setOnes();
    for (int w : {ids.wq, ids.wk, ids.wv, ids.wo, ids.w1}) {
      FillNormal(params_[w].value, 1.0 / std::sqrt(d), rng);
    }
    FillNormal(params_[ids.w2].value, 1.0 / std::sqrt(config_.ffn), rng);
  }
  if (final_gain_ >= 0) params_[final_gain_].value.setOnes();
  FillNormal(params_[q_w_].value, 1.0 / std::sqrt(d), rng);
  FillNormal(params_[r_w_].value, 1.0 / std::sqrt(d), rng);
}

void TransformerQNet::Register() {
  const int d = config_.d_model;
  const int f = config_.ffn;
  token_embed_ = params_.Add("embed/token", kVocabSize, d);
  pos_embed_ = params_.Add("embed/position", kT, d);
  for (int l = 0; l < config_.layers; ++l) {
    const std::string p = "layer" + std::to_string(l) + "/";
    LayerIds ids{};
    ids.ln1_gain = params_.Add(p + "ln1/gain", 1, d);
    ids.ln1_bias = params_.Add(p + "ln1/bias", 1, d);
    ids.wq = params_.Add(p + "attn/wq", d, d);
    ids.bq = params_.Add(p + "attn/bq", 1, d);
    ids.wk = params_.Add(p + "attn/wk", d, d);
    ids.bk = params_.Add(p + "attn/bk", 1, d);
    ids.wv = params_.Add(p + "attn/wv", d, d);
    ids.bv = params_.Add(p + "attn/bv", 1, d);
    ids.wo = params_.Add(p + "attn/wo", d, d);
    ids.bo = params_.Add(p + "attn/bo", 1, d);
    ids.ln2_gain = params_.Add(p + "ln2/gain", 1, d);
    ids.ln2_bias = params_.Add(p + "ln2/bias", 1, d);
    ids.w1 = params_.Add(p + "ffn/w1", d, f);
    ids.b1 = params_.Add(p + "ffn/b1", 1, f);
    ids.w2 = params_.Add(p + "ffn/w2", f, d);
    ids.b2 = params_.Add(p + "ffn/b2", 1, d);
    layers_.push_back(ids);
  }
  if (config_.layers > 0) {
    final_gain_ = params_.Add("final_ln/gain", 1, d);
    final_bias_ = params_.Add("final_ln/bias", 1, d);
  }
  q_w_ = params_.Add("q_head/w", d, kNumActions);
  q_b_ = params_.Add("q_head/b", 1, kNumActions);
  r_w_ = params_.Add("recon_head/w", d, 1);
  r_b_ = params_.Add("recon_head/b", 1, 1);
}

std::unique_ptr<QNetwork> TransformerQNet::Clone() const {
  return std::make_unique<TransformerQNet>(*this);
}

void TransformerQNet::Run(std::span<const TokenSequence> batch, Cache& cache) const {
  const int B = static_cast<int>(batch.size());
  const int d = config_.d_model;
  const int H = config_.heads;
  const int dh = d / H;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const Eigen::Index N = static_cast<Eigen::Index>(B) * kT;
  const Matrix& E = params_[token_embed_].value;
  const Matrix& P = params_[pos_embed_].value;

  cache.batch = B;
  Matrix x(N, d);
  for (int b = 0; b < B; ++b) {
    ValidateTokens(batch[b]);
    for (int t = 0; t < kT; ++t) x.row(b * kT + t) = E.row(batch[b].ids[t]) + P.row(t);
  }

  cache.layers.resize(layers_.size());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const LayerIds& ids = layers_[l];
    auto& c = cache.layers[l];
    auto W = [this](int i) -> const Matrix& { return params_[i].value; };

    c.x_in = x;
    c.a = nn::LayerNorm(x, W(ids.ln1_gain), W(ids.ln1_bias), c.xhat1, c.rstd1);
    c.q.noalias() = c.a * W(ids.wq);
    c.q.rowwise() += W(ids.bq).row(0);
    c.k.noalias() = c.a * W(ids.wk);
    c.k.rowwise() += W(ids.bk).row(0);
    c.v.noalias() = c.a * W(ids.wv);
    c.v.rowwise() += W(ids.bv).row(0);

    c.o.resize(N, d);
    c.probs.resize(static_cast<std::size_t>(B) * H);
    for (int b = 0; b < B; ++b) {
      for (int h = 0; h < H; ++h) {
        Matrix s = (c.q.block(b * kT, h * dh, kT, dh) *
                    c.k.block(b * kT, h * dh, kT, dh).transpose()) * scale;
        nn::SoftmaxRows(s);
        c.o.block(b * kT, h * dh, kT, dh).noalias() =
            s * c.v.block(b * kT, h * dh, kT, dh);
        c.probs[static_cast<std::size_t>(b) * H + h] = std::move(s);
      }
    }

    c.x1 = x;
    c.x1.noalias() += c.o * W(ids.wo);
    c.x1.rowwise() += W(ids.bo).row(0);

    c.b = nn::LayerNorm(c.x1, W(ids.ln2_gain), W(ids.ln2_bias), c.xhat2, c.rstd2);
    c.h.noalias() = c.b * W(ids.w1);
    c.h.rowwise() += W(ids.b1).row(0);
    c.g = nn::GeluMatrix(c.h);

    x = c.x1;
    x.noalias() += c.g * W(ids.w2);
    x.rowwise() += W(ids.b2).row(0);
  }

  if (final_gain_ >= 0) {
    cache.z = nn::LayerNorm(x, params_[final_gain_].value, params_[final_bias_].value,
                            cache.zhat, cache.zrstd);
  } else {
    cache.z = std::move(x);
  }

  const Matrix& qw = params_[q_w_].value;
  const Matrix& qb = params_[q_b_].value;
  const Matrix& rw = params_[r_w_].value;
  const double rb = params_[r_b_].value(0, 0);
  cache.outputs.assign(B, NetOutput{});
  for (int b = 0; b < B; ++b) {
    const RowVector q = cache.z.row(b * kT) * qw + qb;
    const Eigen::VectorXd r = cache.z.block(b * kT + 1, 0, kNumFeatures, d) * rw;
    NetOutput& out = cache.outputs[b];
    for (int a = 0; a < kNumActions; ++a) out.q_values[a] = q(a);
    for (int f = 0; f < kNumFeatures; ++f) out.recon[f] = r(f) + rb;
  }
}

std::vector<NetOutput> TransformerQNet::Forward(std::span<const TokenSequence> batch) const {
  Cache cache;
  Run(batch, cache);
  return std::move(cache.outputs);
}

std::vector<NetOutput> TransformerQNet::Backprop(std::span<const TokenSequence> batch,
                                                 const LossGradFn& loss_grad,
                                                 ParamSet& grads) const {
  Cache cache;
  Run(batch, cache);
  const std::vector<OutputGrad> dout = loss_grad(cache.outputs);
  if (dout.size() != batch.size()) throw DomainError("loss gradient batch size mismatch");

  const int B = cache.batch;
  const int d = config_.d_model;
  const int H = config_.heads;
  const int dh = d / H;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  const Eigen::Index N = static_cast<Eigen::Index>(B) * kT;
  auto W = [this](int i) -> const Matrix& { return params_[i].value; };
  auto G = [&grads](int i) -> Matrix& { return grads[i].value; };

  // Heads.
  Matrix dz = Matrix::Zero(N, d);
  const Matrix& qw = W(q_w_);
  const Matrix& rw = W(r_w_);
  for (int b = 0; b < B; ++b) {
    RowVector dq(kNumActions);
    for (int a = 0; a < kNumActions; ++a) dq(a) = dout[b].q_values[a];
    G(q_w_).noalias() += cache.z.row(b * kT).transpose() * dq;
    G(q_b_).row(0) += dq;
    dz.row(b * kT).noalias() += dq * qw.transpose();

    Eigen::VectorXd dr(kNumFeatures);
    for (int f = 0; f < kNumFeatures; ++f) dr(f) = dout[b].recon[f];
    const auto zr = cache.z.block(b * kT + 1, 0, kNumFeatures, d);
    G(r_w_).noalias() += zr.transpose() * dr;
    G(r_b_)(0, 0) += dr.sum();
    dz.block(b * kT + 1, 0, kNumFeatures, d).noalias() += dr * rw.transpose();
  }

  Matrix dx = final_gain_ >= 0
                  ? nn::LayerNormBackward(dz, cache.zhat, cache.zrstd, W(final_gain_),
                                          G(final_gain_), G(final_bias_))
                  : std::move(dz);

  for (int l = static_cast<int>(layers_.size()) - 1; l >= 0; --l) {
    const LayerIds& ids = layers_[l];
    const auto& c = cache.layers[l];

    // x_out = x1 + gelu(ln2(x1) W1 + b1) W2 + b2
    G(ids.w2).noalias() += c.g.transpose() * dx;
    G(ids.b2).row(0) += dx.colwise().sum();
    Matrix dh_pre = dx * W(ids.w2).transpose();
    dh_pre.array() *= c.h.unaryExpr(&nn::GeluGrad).array();
    G(ids.w1).noalias() += c.b.transpose() * dh_pre;
    G(ids.b1).row(0) += dh_pre.colwise().sum();
    const Matrix db = dh_pre * W(ids.w1).transpose();
    Matrix dx1 = dx + nn::LayerNormBackward(db, c.xhat2, c.rstd2, W(ids.ln2_gain),
                                            G(ids.ln2_gain), G(ids.ln2_bias));

    // x1 = x_in + attn(ln1(x_in)) Wo + bo
    G(ids.wo).noalias() += c.o.transpose() * dx1;
    G(ids.bo).row(0) += dx1.colwise().sum();
    const Matrix d_o = dx1 * W(ids.wo).transpose();

    Matrix dq(N, d), dk(N, d), dv(N, d);
    for (int b = 0; b < B; ++b) {
      for (int h = 0; h < H; ++h) {
        const Matrix& p = c.probs[static_cast<std::size_t>(b) * H + h];
        const auto dob = d_o.block(b * kT, h * dh, kT, dh);
        const Matrix dp = dob * c.v.block(b * kT, h * dh, kT, dh).transpose();
        dv.block(b * kT, h * dh, kT, dh).noalias() = p.transpose() * dob;
        const Eigen::VectorXd row_dot = (dp.array() * p.array()).rowwise().sum();
        Matrix ds = p.array() * (dp.array().colwise() - row_dot.array());
        ds *= scale;
        dq.block(b * kT, h * dh, kT, dh).noalias() = ds * c.k.block(b * kT, h * dh, kT, dh);
        dk.block(b * kT, h * dh, kT, dh).noalias() =
            ds.transpose() * c.q.block(b * kT, h * dh, kT, dh);
      }
    }
    G(ids.wq).noalias() += c.a.transpose() * dq;
    G(ids.bq).row(0) += dq.colwise().sum();
    G(ids.wk).noalias() += c.a.transpose() * dk;
    G(ids.bk).row(0) += dk.colwise().sum();
    G(ids.wv).noalias() += c.a.transpose() * dv;
    G(ids.bv).row(0) += dv.colwise().sum();
    Matrix da = dq * W(ids.wq).transpose();
    da.noalias() += dk * W(ids.wk).transpose();
    da.noalias() += dv * W(ids.wv).transpose();

    dx = dx1 + nn::LayerNormBackward(da, c.xhat1, c.rstd1, W(ids.ln1_gain),
                                     G(ids.ln1_gain), G(ids.ln1_bias));
  }

  Matrix& dE = G(token_embed_);
  Matrix& dP = G(pos_embed_);
  for (int b = 0; b < B; ++b) {
    for (int t = 0; t < kT; ++t) {
      dE.row(batch[b].ids[t]) += dx.row(b * kT + t);
      dP.row(t) += dx.row(b * kT + t);
    }
  }
  return std::move(cache.outputs);
}

}  // namespace maskq
