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

#ifndef MASKQ_PARAMS_H_
#define MASKQ_PARAMS_H_

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace maskq {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

struct Tensor {
  std::string name;
  Matrix value;
};

// Ordered table of named 2-D tensors. Order is fixed at construction and is
// the order used by checkpoints, optimizers and flat indexing.
class ParamSet {
 public:
  // Returns the index of the new zero-filled tensor.
  int Add(std::string name, int rows, int cols);

  int size() const { return static_cast<int>(tensors_.size()); }
  Tensor& operator[](int i) { return tensors_[i]; }
  const Tensor& operator[](int i) const { return tensors_[i]; }
  std::vector<Tensor>& tensors() { return tensors_; }
  const std::vector<Tensor>& tensors() const { return tensors_; }

  // Total number of scalars.
  std::size_t ParameterCount() const;

  // Same names and shapes, all zeros.
  ParamSet ZerosLike() const;
  void SetZero();

  // Scalar access through a flat index running over tensors in order.
  double& At(std::size_t flat);
  double At(std::size_t flat) const;
  // "name[row,col]" for a flat index.
  std::string Describe(std::size_t flat) const;

  // Copies values from `other`; names and shapes must match exactly, else a
  // CompatibilityError names the first mismatched tensor.
  void AssignFrom(const std::vector<Tensor>& other);

  bool AllFinite() const;

 private:
  std::vector<Tensor> tensors_;
};

}  // namespace maskq

#endif  // MASKQ_PARAMS_H_
