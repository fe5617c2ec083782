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
#include <array>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "maskq/encode.h"
#include "maskq/errors.h"

namespace maskq {
namespace {

FeatureRanges UnitRanges(double hi) {
  FeatureRanges r;
  r.lo.fill(0.0);
  r.hi.fill(hi);
  return r;
}

TEST_SUITE("encode") {

TEST_CASE("normalization clamps and floors") {
  const FeatureRanges r = UnitRanges(30.0);
  CropState s{};
  s.fill(15.0);
  s[0] = 0.0;
  s[1] = 30.0;
  s[2] = -5.0;
  s[3] = 99.0;
  const ValueVector v = NormalizeState(s, r);
  CHECK(v[0] == 0);
  CHECK(v[1] == 300);
  CHECK(v[2] == 0);
  CHECK(v[3] == 300);
  CHECK(v[4] == 150);
  s[7] = std::numeric_limits<double>::quiet_NaN();
  try {
    NormalizeState(s, r);
    FAIL("expected EncodingError");
  } catch (const EncodingError& e) {
    CHECK(std::string(e.what()).find("feature 7") != std::string::npos);
  }
}

TEST_CASE("ranges from the environment are valid and cover reset states") {
  const EnvConfig c;
  const FeatureRanges r = FeatureRangesFor(c);
  CHECK_NOTHROW(ValidateRanges(r));
  for (int f = 0; f < kNumFeatures; ++f) CHECK(r.lo[f] < r.hi[f]);
  Env env(c, 0);
  const CropState s = env.Reset();
  for (int f = 0; f < kNumFeatures; ++f) {
    CHECK(s[f] >= r.lo[f]);
    CHECK(s[f] <= r.hi[f]);
  }
  FeatureRanges bad = r;
  bad.hi[3] = bad.lo[3];
  CHECK_THROWS(ValidateRanges(bad));
}

TEST_CASE("masked count law") {
  CHECK(MaskedCountFor(0.0) == 0);
  CHECK(MaskedCountFor(0.48) == 12);
  CHECK(MaskedCountFor(1.0) == 25);
  CHECK(MaskedCountFor(0.5) == 12);
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const Mask m = SampleMask(0.48, 0.48, rng);
    REQUIRE(m.masked_count() == 12);
    const double alpha = rng.Uniform();
    CHECK(SampleMask(alpha, alpha, rng).masked_count() ==
          static_cast<int>(std::floor(25 * alpha + 1e-9)));
  }
  CHECK(SampleMask(0, 0, rng) == Mask::AllVisible());
  CHECK_THROWS_AS(SampleMask(0.5, 0.2, rng), DomainError);
  CHECK_THROWS_AS(SampleMask(-0.1, 0.2, rng), DomainError);
  CHECK_THROWS_AS(SampleMask(0.1, 1.2, rng), DomainError);
}

TEST_CASE("masked count histogram over the training range") {
  Rng rng(2);
  const int n = 100000;
  std::array<int, kNumFeatures + 1> hist{};
  for (int i = 0; i < n; ++i) {
    const int k = SampleMask(0.0, 0.48, rng).masked_count();
    REQUIRE(k >= 0);
    REQUIRE(k <= 12);
    ++hist[k];
  }
  // alpha is continuous, so counts 0..11 each cover a 0.04-wide interval
  // and 12 is reached only at the endpoint.
  const double p = 1.0 / 12.0;
  const double sigma = std::sqrt(p * (1 - p) / n);
  for (int k = 0; k < 12; ++k) {
    CHECK(std::abs(hist[k] / double(n) - p) < 0.02);
    CHECK(std::abs(hist[k] / double(n) - p) < 5 * sigma);
  }
  CHECK(hist[12] <= 1);
}

TEST_CASE("each feature is masked uniformly") {
  Rng rng(3);
  const int n = 100000;
  std::array<int, kNumFeatures> masked{};
  for (int i = 0; i < n; ++i) {
    const Mask m = SampleMask(0.48, 0.48, rng);
    for (int f = 0; f < kNumFeatures; ++f) masked[f] += !m.visible[f];
  }
  for (int f = 0; f < kNumFeatures; ++f) {
    CHECK(std::abs(masked[f] / double(n) - 12.0 / 25.0) < 0.01);
  }
}

TEST_CASE("apply mask layout") {
  ValueVector v{};
  for (int f = 0; f < kNumFeatures; ++f) v[f] = 10 * f;
  const TokenSequence all = ApplyMask(v, Mask::AllVisible());
  CHECK(all.ids[0] == kClsToken);
  CHECK(all.ids[26] == kSepToken);
  for (int f = 0; f < kNumFeatures; ++f) CHECK(all.ids[f + 1] == v[f]);

  const TokenSequence none = ApplyMask(v, Mask::AllMasked());
  for (int f = 0; f < kNumFeatures; ++f) CHECK(none.ids[f + 1] == kMaskToken);

  ValueVector zeros{};
  const Mask m = Mask::Hiding({4});
  CHECK(m.masked_count() == 1);
  CHECK(m.alpha() == doctest::Approx(0.04));
  const TokenSequence one = ApplyMask(zeros, m);
  for (int p = 1; p <= kNumFeatures; ++p) CHECK(one.ids[p] == (p == 5 ? kMaskToken : 0));
}

TEST_CASE("token validation") {
  TokenSequence seq = ApplyMask(ValueVector{}, Mask::AllVisible());
  CHECK_NOTHROW(ValidateTokens(seq));
  seq.ids[3] = kVocabSize;
  CHECK_THROWS_AS(ValidateTokens(seq), DomainError);
  seq.ids[3] = -1;
  CHECK_THROWS_AS(ValidateTokens(seq), DomainError);
}

TEST_CASE("observation targets are v / 300") {
  ValueVector v{};
  v[0] = 0;
  v[1] = 300;
  v[2] = 150;
  const TargetVector t = ObservationTargets(v);
  CHECK(t[0] == 0.0);
  CHECK(t[1] == 1.0);
  CHECK(t[2] == 0.5);
}

TEST_CASE("encoding is pure") {
  const EnvConfig c;
  Env env(c, 4);
  const CropState s = env.Reset();
  const FeatureRanges r = FeatureRangesFor(c);
  CHECK(NormalizeState(s, r) == NormalizeState(s, r));
  Rng a(9), b(9);
  CHECK(SampleMask(0, 0.48, a) == SampleMask(0, 0.48, b));
}

}  // TEST_SUITE

}  // namespace
}  // namespace maskq
