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

#ifndef MASKQ_RANDOM_H_
#define MASKQ_RANDOM_H_

#include <cstdint>
#include <random>
#include <string>

namespace maskq {

// Seeded random stream. The engine is std::mt19937_64 (its output sequence is
// fixed by the standard); the distribution transforms come from Boost.Random,
// whose algorithms do not vary between standard libraries. Together they make
// every draw reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  // Uniform on [0, 1).
  double Uniform();
  // Uniform on [lo, hi].
  double Uniform(double lo, double hi);
  // Uniform integer on [lo, hi].
  int UniformInt(int lo, int hi);
  double Normal(double mean, double stddev);
  double Gamma(double shape, double scale);
  bool Bernoulli(double p);

  // Engine state as text; Restore(Serialize()) resumes the stream exactly.
  std::string Serialize() const;
  void Restore(const std::string& state);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// Stateless seed derivation (splitmix64 finalizer). Used to give every
// (base seed, purpose, index) triple its own stream so that, e.g., evaluation
// episode i sees the same weather regardless of how masks were drawn.
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream,
                         std::uint64_t index = 0);

}  // namespace maskq

#endif  // MASKQ_RANDOM_H_
