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

// Row-wise building blocks shared by the approximators. Internal header.

#ifndef MASKQ_SRC_NN_OPS_H_
#define MASKQ_SRC_NN_OPS_H_

#include <cmath>
#include <numbers>

#include "maskq/params.h"

namespace maskq::nn {

inline constexpr double kLayerNormEps = 1e-5;

// y = xhat * gain + bias with xhat the per-row standardized input.
inline Matrix LayerNorm(const Matrix& x, const Matrix& gain, const Matrix& bias,
                        Matrix& xhat, Eigen::VectorXd& rstd) {
  const Eigen::Index n = x.rows();
  const double d = static_cast<double>(x.cols());
  xhat.resize(x.rows(), x.cols());
  rstd.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = x.row(i).sum() / d;
    const auto centered = x.row(i).array() - mean;
    const double var = centered.square().sum() / d;
    rstd(i) = 1.0 / std::sqrt(var + kLayerNormEps);
    xhat.row(i) = centered * rstd(i);
  }
  Matrix y = xhat.array().rowwise() * gain.row(0).array();
  y.rowwise() += bias.row(0);
  return y;
}

inline Matrix LayerNormBackward(const Matrix& dy, const Matrix& xhat,
                                const Eigen::VectorXd& rstd, const Matrix& gain,
                                Matrix& dgain, Matrix& dbias) {
  const double d = static_cast<double>(dy.cols());
  dgain.row(0) += (dy.array() * xhat.array()).colwise().sum().matrix();
  dbias.row(0) += dy.colwise().sum();
  Matrix dxhat = dy.array().rowwise() * gain.row(0).array();
  Matrix dx(dy.rows(), dy.cols());
  for (Eigen::Index i = 0; i < dy.rows(); ++i) {
    const double mean_d = dxhat.row(i).sum() / d;
    const double mean_dx = dxhat.row(i).dot(xhat.row(i)) / d;
    dx.row(i) = rstd(i) * (dxhat.row(i).array() - mean_d - xhat.row(i).array() * mean_dx);
  }
  return dx;
}

// tanh approximation of GELU; smooth everywhere, which keeps finite
// difference checks free of kinks.
inline double Gelu(double x) {
  constexpr double c = 0.7978845608028654;  // sqrt(2/pi)
  return 0.5 * x * (1.0 + std::tanh(c * (x + 0.044715 * x * x * x)));
}

inline double GeluGrad(double x) {
  constexpr double c = 0.7978845608028654;
  const double u = c * (x + 0.044715 * x * x * x);
  const double t = std::tanh(u);
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * c * (1.0 + 3.0 * 0.044715 * x * x);
}

inline Matrix GeluMatrix(const Matrix& x) { return x.unaryExpr(&Gelu); }

// In place, row-wise.
inline void SoftmaxRows(Matrix& s) {
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    const double m = s.row(i).maxCoeff();
    s.row(i) = (s.row(i).array() - m).exp();
    s.row(i) /= s.row(i).sum();
  }
}

}  // namespace maskq::nn

#endif  // MASKQ_SRC_NN_OPS_H_
