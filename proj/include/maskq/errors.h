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

#ifndef MASKQ_ERRORS_H_
#define MASKQ_ERRORS_H_

#include <stdexcept>
#include <string>

namespace maskq {

// Root of every error thrown by the library. The CLI maps these to exit
// status 2; usage problems are reported separately with status 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An EnvConfig/TrainConfig invariant does not hold.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an operation (bad action index, inverted
// mask bounds, empty batch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operation invoked in the wrong lifecycle state (step after done, sampling
// an undersized replay buffer).
class StateError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

// Non-finite gradients or losses during optimization.
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Malformed checkpoint bytes.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Well-formed data that does not fit the current architecture or
// normalization.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

// Config file syntax problems and unknown keys.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace maskq

#endif  // MASKQ_ERRORS_H_
