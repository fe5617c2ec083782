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

#include "maskq/encode.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "maskq/errors.h"

namespace maskq {

FeatureRanges FeatureRangesFor(const EnvConfig& c) {
  const double days = c.season_max_days;
  const double tmax_lo = c.temp_mean - c.temp_amplitude - 4 * c.temp_sigma;
  const double tmax_hi = c.temp_mean + c.temp_amplitude + 4 * c.temp_sigma;
  const double srad_hi = c.srad_mean + c.srad_amplitude + 4 * c.srad_sigma;
  const double rain_hi = std::max(10.0, 8.0 * c.rain_shape * c.rain_scale_mm);
  const double n_applied_hi = 4.0 * days;
  const double biomass_hi =
      0.6 * c.radiation_use_efficiency * (c.srad_mean + c.srad_amplitude) * 10.0 * days;

  FeatureRanges r;
  auto set = [&r](int f, double lo, double hi) {
    r.lo[f] = lo;
    r.hi[f] = hi;
  };
  set(kDaysAfterPlanting, 0, days);
  set(kTmax, tmax_lo, tmax_hi);
  set(kTmin, tmax_lo - c.diurnal_range - 4 * c.diurnal_sigma,
      tmax_hi - c.diurnal_range + 4 * c.diurnal_sigma);
  set(kSrad, 0, srad_hi);
  set(kRain, 0, rain_hi);
  set(kSoilWater, c.wilting_point, c.theta_sat);
  set(kCumRain, 0, 1.0 + 1.5 * days * c.p_wet * c.rain_shape * c.rain_scale_mm);
  set(kCumIrrigation, 0, 6.0 * days);
  set(kCumNApplied, 0, n_applied_hi);
  set(kSoilNitrate, 0, c.initial_nitrate + 320.0 + c.mineralization_rate * days);
  set(kCumNitrateLeached, 0, 0.5 * n_applied_hi);
  set(kDailyNitrateLeached, 0, 160.0 * std::max(c.k_leach, 0.01));
  set(kCumPlantNUptake, 0, std::max(1.0, c.n_crit_conc * biomass_hi));
  set(kLeafAreaIndex, 0, c.lai_max);
  set(kBiomass, 0, biomass_hi);
  set(kRootDepth, 0, std::max(1.0, c.root_max_cm));
  set(kGrowthStage, 0, 9);
  set(kCumThermalTime, 0, c.tt_maturity);
  set(kWaterStress, 0, 1);
  set(kNitrogenStress, 0, 1);
  set(kDailyEt, 0, std::max(1.0, c.et0_rad_coef * srad_hi * (tmax_hi + c.et0_temp_offset)));
  set(kDailyDrainage, 0, rain_hi + 24.0);
  set(kGrainWeight, 0, std::max(1.0, c.grain_partition * biomass_hi));
  set(kDayOfYear, 1, 365);
  set(kForecastRain, 0, rain_hi);

  for (int f = 0; f < kNumFeatures; ++f) {
    const double pad = 0.05 * (r.hi[f] - r.lo[f]);
    r.lo[f] -= pad;
    r.hi[f] += pad;
  }
  ValidateRanges(r);
  return r;
}

void ValidateRanges(const FeatureRanges& ranges) {
  for (int f = 0; f < kNumFeatures; ++f) {
    if (!std::isfinite(ranges.lo[f]) || !std::isfinite(ranges.hi[f]) ||
        !(ranges.lo[f] < ranges.hi[f])) {
      throw ConfigError("invalid range for feature " + std::to_string(f) + " (" +
                        std::string(FeatureName(f)) + "): need finite min < max");
    }
  }
}

ValueVector NormalizeState(const CropState& state, const FeatureRanges& ranges) {
  ValueVector v{};
  for (int f = 0; f < kNumFeatures; ++f) {
    if (!std::isfinite(state[f])) {
      throw EncodingError("non-finite value for feature " + std::to_string(f) +
                          " (" + std::string(FeatureName(f)) + ")");
    }
    const double unit =
        std::clamp((state[f] - ranges.lo[f]) / (ranges.hi[f] - ranges.lo[f]), 0.0, 1.0);
    v[f] = static_cast<int>(std::floor(kMaxValueToken * unit));
  }
  return v;
}

Mask Mask::AllVisible() {
  Mask m;
  m.visible.fill(true);
  return m;
}

Mask Mask::AllMasked() {
  Mask m;
  m.visible.fill(false);
  return m;
}

Mask Mask::Hiding(const std::vector<int>& features) {
  Mask m = AllVisible();
  for (int f : features) {
    if (f < 0 || f >= kNumFeatures) {
      throw DomainError("mask feature index out of range: " + std::to_string(f));
    }
    m.visible[f] = false;
  }
  return m;
}

int Mask::masked_count() const {
  return static_cast<int>(std::count(visible.begin(), visible.end(), false));
}

int MaskedCountFor(double alpha) {
  // The epsilon keeps products such as 0.48 * 25 from landing just below an
  // integer.
  const int n = static_cast<int>(std::floor(alpha * kNumFeatures + 1e-9));
  return std::clamp(n, 0, kNumFeatures);
}

Mask SampleMask(double alpha_lo, double alpha_hi, Rng& rng) {
  if (!(alpha_lo >= 0.0) || !(alpha_hi <= 1.0) || !(alpha_lo <= alpha_hi)) {
    throw DomainError("mask ratio bounds must satisfy 0 <= lo <= hi <= 1, got [" +
                      std::to_string(alpha_lo) + ", " + std::to_string(alpha_hi) + "]");
  }
  const double alpha = rng.Uniform(alpha_lo, alpha_hi);
  const int count = MaskedCountFor(alpha);
  Mask m = Mask::AllVisible();
  if (count == 0) return m;
  // Partial Fisher-Yates: the first `count` slots are a uniform subset.
  std::array<int, kNumFeatures> order;
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < count; ++i) {
    const int j = rng.UniformInt(i, kNumFeatures - 1);
    std::swap(order[i], order[j]);
    m.visible[order[i]] = false;
  }
  return m;
}

TokenSequence ApplyMask(const ValueVector& values, const Mask& mask) {
  TokenSequence seq;
  seq.ids[0] = kClsToken;
  for (int f = 0; f < kNumFeatures; ++f) {
    seq.ids[f + 1] = mask.visible[f] ? values[f] : kMaskToken;
  }
  seq.ids[kSeqLen - 1] = kSepToken;
  return seq;
}

void ValidateTokens(const TokenSequence& seq) {
  for (int i = 0; i < kSeqLen; ++i) {
    if (seq.ids[i] < 0 || seq.ids[i] >= kVocabSize) {
      throw DomainError("token id " + std::to_string(seq.ids[i]) + " at position " +
                        std::to_string(i) + " outside vocabulary of " +
                        std::to_string(kVocabSize));
    }
  }
}

TargetVector ObservationTargets(const ValueVector& values) {
  TargetVector t{};
  for (int f = 0; f < kNumFeatures; ++f) {
    t[f] = values[f] / static_cast<double>(kMaxValueToken);
  }
  return t;
}

}  // namespace maskq
