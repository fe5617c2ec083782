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

#include "maskq/params.h"

#include <string>

#include "maskq/errors.h"

namespace maskq {
namespace {

std::string Shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

int ParamSet::Add(std::string name, int rows, int cols) {
  tensors_.push_back({std::move(name), Matrix::Zero(rows, cols)});
  return size() - 1;
}

std::size_t ParamSet::ParameterCount() const {
  std::size_t n = 0;
  for (const Tensor& t : tensors_) n += t.value.size();
  return n;
}

ParamSet ParamSet::ZerosLike() const {
  ParamSet out;
  for (const Tensor& t : tensors_) {
    out.Add(t.name, static_cast<int>(t.value.rows()), static_cast<int>(t.value.cols()));
  }
  return out;
}

void ParamSet::SetZero() {
  for (Tensor& t : tensors_) t.value.setZero();
}

double& ParamSet::At(std::size_t flat) {
  for (Tensor& t : tensors_) {
    const auto n = static_cast<std::size_t>(t.value.size());
    if (flat < n) return t.value.data()[flat];
    flat -= n;
  }
  throw DomainError("flat parameter index out of range");
}

double ParamSet::At(std::size_t flat) const {
  return const_cast<ParamSet*>(this)->At(flat);
}

std::string ParamSet::Describe(std::size_t flat) const {
  for (const Tensor& t : tensors_) {
    const auto n = static_cast<std::size_t>(t.value.size());
    if (flat < n) {
      const auto cols = static_cast<std::size_t>(t.value.cols());
      return t.name + "[" + std::to_string(flat / cols) + "," +
             std::to_string(flat % cols) + "]";
    }
    flat -= n;
  }
  throw DomainError("flat parameter index out of range");
}

void ParamSet::AssignFrom(const std::vector<Tensor>& other) {
  const std::size_t n = std::max(other.size(), tensors_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= tensors_.size()) {
      throw CompatibilityError("unexpected extra tensor '" + other[i].name + "'");
    }
    const Tensor& mine = tensors_[i];
    if (i >= other.size()) {
      throw CompatibilityError("missing tensor '" + mine.name + "'");
    }
    if (other[i].name != mine.name) {
      throw CompatibilityError("tensor #" + std::to_string(i) + " is '" + other[i].name +
                               "', expected '" + mine.name + "'");
    }
    if (other[i].value.rows() != mine.value.rows() ||
        other[i].value.cols() != mine.value.cols()) {
      throw CompatibilityError("tensor '" + mine.name + "' has shape " +
                               Shape(other[i].value) + ", expected " + Shape(mine.value));
    }
  }
  for (std::size_t i = 0; i < tensors_.size(); ++i) tensors_[i].value = other[i].value;
}

bool ParamSet::AllFinite() const {
  for (const Tensor& t : tensors_) {
    if (!t.value.allFinite()) return false;
  }
  return true;
}

}  // namespace maskq
