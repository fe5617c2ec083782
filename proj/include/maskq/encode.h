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

#ifndef MASKQ_ENCODE_H_
#define MASKQ_ENCODE_H_

#include <array>
#include <vector>

#include "maskq/env.h"
#include "maskq/random.h"

namespace maskq {

inline constexpr int kMaxValueToken = 300;
inline constexpr int kMaskToken = 301;
inline constexpr int kClsToken = 302;
inline constexpr int kSepToken = 303;
inline constexpr int kVocabSize = 304;
inline constexpr int kSeqLen = kNumFeatures + 2;

// Per-feature physical bounds mapped onto the integer range [0, 300].
struct FeatureRanges {
  std::array<double, kNumFeatures> lo{};
  std::array<double, kNumFeatures> hi{};

  bool operator==(const FeatureRanges&) const = default;
};

// Bounds derived from the env config's physical extremes, widened by 5% of
// the span on each side.
FeatureRanges FeatureRangesFor(const EnvConfig& config);
void ValidateRanges(const FeatureRanges& ranges);

using ValueVector = std::array<int, kNumFeatures>;
using TargetVector = std::array<double, kNumFeatures>;

// floor(300 * clamp((s - lo) / (hi - lo), 0, 1)) per feature.
ValueVector NormalizeState(const CropState& state, const FeatureRanges& ranges);

// visible[i] == false hides feature i.
struct Mask {
  std::array<bool, kNumFeatures> visible{};

  static Mask AllVisible();
  static Mask AllMasked();
  static Mask Hiding(const std::vector<int>& features);

  int masked_count() const;
  double alpha() const { return masked_count() / static_cast<double>(kNumFeatures); }

  bool operator==(const Mask&) const = default;
};

// Number of features hidden at ratio alpha: floor(25 * alpha).
int MaskedCountFor(double alpha);

// Draws alpha uniformly on [alpha_lo, alpha_hi], then hides floor(25 alpha)
// features chosen uniformly without replacement.
Mask SampleMask(double alpha_lo, double alpha_hi, Rng& rng);

// [CLS], 25 value-or-MASK ids, [SEP].
struct TokenSequence {
  std::array<int, kSeqLen> ids{};

  bool operator==(const TokenSequence&) const = default;
};

TokenSequence ApplyMask(const ValueVector& values, const Mask& mask);
void ValidateTokens(const TokenSequence& seq);

// Reconstruction targets in [0, 1]: v / 300.
TargetVector ObservationTargets(const ValueVector& values);

}  // namespace maskq

#endif  // MASKQ_ENCODE_H_
