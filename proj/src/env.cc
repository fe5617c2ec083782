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

#include "maskq/env.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "maskq/errors.h"

namespace maskq {
namespace {

constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "days_after_planting", "tmax",           "tmin",
    "srad",                "rain",           "soil_water",
    "cum_rain",            "cum_irrigation", "cum_n_applied",
    "soil_nitrate",        "cum_nitrate_leached",
    "daily_nitrate_leached",
    "cum_plant_n_uptake",  "leaf_area_index", "biomass",
    "root_depth",          "growth_stage",   "cum_thermal_time",
    "water_stress",        "nitrogen_stress", "daily_et",
    "daily_drainage",      "grain_weight",   "day_of_year",
    "forecast_rain",
};

constexpr double kNitrogenStep = 40.0;
constexpr double kWaterStep = 6.0;
constexpr int kLevels = 5;

void Require(bool ok, const std::string& constraint) {
  if (!ok) throw ConfigError("invalid env config: " + constraint);
}

template <typename T>
std::string Show(std::string_view name, T value) {
  std::ostringstream out;
  out << name << "=" << value;
  return out.str();
}

}  // namespace

std::string_view FeatureName(int index) {
  if (index < 0 || index >= kNumFeatures) {
    throw DomainError("feature index out of range: " + std::to_string(index));
  }
  return kFeatureNames[index];
}

ActionDose DecodeAction(int index) {
  if (index < 0 || index >= kNumActions) {
    throw DomainError("action index out of range [0, 24]: " +
                      std::to_string(index));
  }
  return {kNitrogenStep * (index / kLevels), kWaterStep * (index % kLevels)};
}

int EncodeAction(const ActionDose& dose) {
  for (int i = 0; i < kNumActions; ++i) {
    if (DecodeAction(i) == dose) return i;
  }
  return -1;
}

RewardWeights RewardPreset(int rf) {
  switch (rf) {
    case 1:
      return {0.158, 0.79, 1.1, 0.0};
    case 2:
      return {0.158, 0.79, 0.0, 0.0};
    case 3:
      return {0.158, 0.0, 1.1, 0.0};
    case 4:
      return {0.158, 1.58, 1.1, 0.0};
    default:
      throw DomainError("reward preset must be 1..4, got " +
                        std::to_string(rf));
  }
}

std::array<RewardWeights, kNumRewardPresets> AllRewardPresets() {
  return {RewardPreset(1), RewardPreset(2), RewardPreset(3), RewardPreset(4)};
}

double ComputeReward(const RewardComponents& rc, const RewardWeights& w,
                     bool is_harvest) {
  double r = -w.w2 * rc.n_applied - w.w3 * rc.water_applied -
             w.w4 * rc.nitrate_leached;
  if (is_harvest) r += w.w1 * rc.yield_at_harvest;
  return r;
}

void ValidateEnvConfig(const EnvConfig& c) {
  Require(c.season_max_days >= 1, Show("season_max_days >= 1, got", c.season_max_days));
  Require(c.planting_doy >= 1 && c.planting_doy <= 365,
          Show("1 <= planting_doy <= 365, got", c.planting_doy));
  Require(c.soil_depth_mm > 0, Show("soil_depth_mm > 0, got", c.soil_depth_mm));
  Require(c.wilting_point > 0, Show("wilting_point > 0, got", c.wilting_point));
  Require(c.wilting_point < c.critical_sw,
          "wilting_point < critical_sw (" + std::to_string(c.wilting_point) +
              " >= " + std::to_string(c.critical_sw) + ")");
  Require(c.critical_sw < c.field_capacity,
          "critical_sw < field_capacity (" + std::to_string(c.critical_sw) +
              " >= " + std::to_string(c.field_capacity) + ")");
  Require(c.field_capacity < c.theta_sat,
          "field_capacity < theta_sat (" + std::to_string(c.field_capacity) +
              " >= " + std::to_string(c.theta_sat) + ")");
  Require(c.theta_sat <= 1.0, Show("theta_sat <= 1, got", c.theta_sat));
  Require(c.tt_flowering > 0, Show("tt_flowering > 0, got", c.tt_flowering));
  Require(c.tt_flowering < c.tt_maturity,
          "tt_flowering < tt_maturity (" + std::to_string(c.tt_flowering) +
              " >= " + std::to_string(c.tt_maturity) + ")");
  Require(c.k_drain >= 0 && c.k_drain <= 1, Show("0 <= k_drain <= 1, got", c.k_drain));
  Require(c.k_leach >= 0 && c.k_leach <= 1, Show("0 <= k_leach <= 1, got", c.k_leach));
  Require(c.d_half_mm > 0, Show("d_half_mm > 0, got", c.d_half_mm));
  Require(c.rain_cap_mm >= 0, Show("rain_cap_mm >= 0, got", c.rain_cap_mm));
  Require(c.initial_nitrate >= 0, Show("initial_nitrate >= 0, got", c.initial_nitrate));
  Require(c.mineralization_rate >= 0,
          Show("mineralization_rate >= 0, got", c.mineralization_rate));
  Require(c.n_crit_conc >= 0, Show("n_crit_conc >= 0, got", c.n_crit_conc));
  Require(c.max_n_uptake >= 0, Show("max_n_uptake >= 0, got", c.max_n_uptake));
  Require(c.radiation_use_efficiency >= 0,
          Show("radiation_use_efficiency >= 0, got", c.radiation_use_efficiency));
  Require(c.canopy_k >= 0, Show("canopy_k >= 0, got", c.canopy_k));
  Require(c.lai_max > 0, Show("lai_max > 0, got", c.lai_max));
  Require(c.lai_initial >= 0 && c.lai_initial <= c.lai_max,
          Show("0 <= lai_initial <= lai_max, got", c.lai_initial));
  Require(c.lai_growth_rate >= 0, Show("lai_growth_rate >= 0, got", c.lai_growth_rate));
  Require(c.lai_senescence_rate >= 0,
          Show("lai_senescence_rate >= 0, got", c.lai_senescence_rate));
  Require(c.grain_partition >= 0 && c.grain_partition <= 1,
          Show("0 <= grain_partition <= 1, got", c.grain_partition));
  Require(c.root_initial_cm >= 0 && c.root_initial_cm <= c.root_max_cm,
          Show("0 <= root_initial_cm <= root_max_cm, got", c.root_initial_cm));
  Require(c.root_growth_cm >= 0, Show("root_growth_cm >= 0, got", c.root_growth_cm));
  Require(c.et0_rad_coef >= 0, Show("et0_rad_coef >= 0, got", c.et0_rad_coef));
  Require(c.temp_sigma >= 0, Show("temp_sigma >= 0, got", c.temp_sigma));
  Require(c.diurnal_sigma >= 0, Show("diurnal_sigma >= 0, got", c.diurnal_sigma));
  Require(c.diurnal_range >= 0, Show("diurnal_range >= 0, got", c.diurnal_range));
  Require(c.srad_sigma >= 0, Show("srad_sigma >= 0, got", c.srad_sigma));
  Require(c.srad_mean >= 0, Show("srad_mean >= 0, got", c.srad_mean));
  Require(c.p_wet >= 0 && c.p_wet <= 1, Show("0 <= p_wet <= 1, got", c.p_wet));
  Require(c.rain_shape > 0, Show("rain_shape > 0, got", c.rain_shape));
  Require(c.rain_scale_mm > 0, Show("rain_scale_mm > 0, got", c.rain_scale_mm));
}

EnvConfig NoiseFreeEnvConfig() {
  EnvConfig c;
  c.temp_sigma = 0.0;
  c.diurnal_sigma = 0.0;
  c.srad_sigma = 0.0;
  c.p_wet = 0.0;
  return c;
}

WeatherGenerator::WeatherGenerator(const EnvConfig& config, std::uint64_t seed)
    : config_(config), rng_(seed) {}

void WeatherGenerator::Reset() { pending_rain_ = SampleRain(config_, rng_); }

WeatherDay WeatherGenerator::Next(int day_of_year) {
  const EnvConfig& c = config_;
  const double season =
      std::sin(2.0 * std::numbers::pi * (day_of_year - c.temp_phase_doy) / 365.0);
  WeatherDay day;
  day.rain = pending_rain_;
  day.tmax = c.temp_mean + c.temp_amplitude * season + rng_.Normal(0.0, c.temp_sigma);
  day.tmin = day.tmax - c.diurnal_range + rng_.Normal(0.0, c.diurnal_sigma);
  day.srad = std::max(
      0.0, c.srad_mean + c.srad_amplitude * season + rng_.Normal(0.0, c.srad_sigma));
  pending_rain_ = SampleRain(c, rng_);
  day.forecast_rain = pending_rain_;
  return day;
}

double WeatherGenerator::SampleRain(const EnvConfig& config, Rng& rng) {
  if (!rng.Bernoulli(config.p_wet)) return 0.0;
  return rng.Gamma(config.rain_shape, config.rain_scale_mm);
}

double ReferenceEt(const EnvConfig& config, double tmax, double tmin,
                   double srad) {
  const double tmean = 0.5 * (tmax + tmin);
  return std::max(0.0, config.et0_rad_coef * srad * (tmean + config.et0_temp_offset));
}

double CanopyCover(const EnvConfig& config, double lai) {
  return 1.0 - std::exp(-config.canopy_k * std::max(0.0, lai));
}

double WaterStressFactor(const EnvConfig& config, double soil_water) {
  const double f = (soil_water - config.wilting_point) /
                   (config.critical_sw - config.wilting_point);
  return std::clamp(f, 0.0, 1.0);
}

WaterFluxes WaterBalanceStep(const EnvConfig& config, double storage_mm,
                             double lai, double et0, double rain,
                             double irrigation) {
  const double depth = config.soil_depth_mm;
  WaterFluxes f;
  f.storage_before = storage_mm;
  f.water_stress = WaterStressFactor(config, storage_mm / depth);
  f.runoff = std::max(0.0, rain - config.rain_cap_mm);
  f.infiltration = rain - f.runoff + irrigation;

  const double available = storage_mm + f.infiltration;
  // ET never draws the bucket below the wilting point.
  f.et = std::min(et0 * CanopyCover(config, lai) * f.water_stress,
                  std::max(0.0, available - config.wilting_point * depth));

  const double above_fc = available - f.et - config.field_capacity * depth;
  f.drainage = config.k_drain * std::max(0.0, above_fc);
  // Anything still above saturation leaves as drainage the same day.
  const double above_sat = available - f.et - f.drainage - config.theta_sat * depth;
  if (above_sat > 0.0) f.drainage += above_sat;

  f.storage_after = storage_mm + f.infiltration - f.et - f.drainage;
  return f;
}

NitrogenFluxes NitrogenBalanceStep(const EnvConfig& config, double pool,
                                   double n_applied, double drainage,
                                   double demand) {
  NitrogenFluxes f;
  f.pool_before = pool;
  f.mineralized = config.mineralization_rate;
  f.pool_before_losses = pool + n_applied + f.mineralized;
  if (drainage > 0.0) {
    f.leached = f.pool_before_losses * config.k_leach *
                (drainage / (drainage + config.d_half_mm));
  }
  const double remaining = f.pool_before_losses - f.leached;
  f.uptake = std::clamp(demand, 0.0, std::max(0.0, remaining));
  f.pool_after = remaining - f.uptake;
  return f;
}

double ThermalTimeIncrement(const EnvConfig& config, double tmax, double tmin) {
  return std::max(0.0, 0.5 * (tmax + tmin) - config.base_temp);
}

double BiomassIncrement(const EnvConfig& config, double lai, double srad,
                        double stress) {
  // g/m^2 -> kg/ha
  return config.radiation_use_efficiency * srad * CanopyCover(config, lai) *
         stress * 10.0;
}

int GrowthStageFor(const EnvConfig& config, double cum_thermal_time) {
  const int decile =
      static_cast<int>(std::floor(10.0 * cum_thermal_time / config.tt_maturity));
  return std::clamp(decile, 0, 9);
}

GrowthFluxes GrowthStep(const EnvConfig& config, CropStatus& crop,
                        const WeatherDay& weather, double water_stress,
                        double nitrogen_stress) {
  GrowthFluxes g;
  const double stress = std::min(water_stress, nitrogen_stress);
  const bool flowered = crop.cum_thermal_time >= config.tt_flowering;
  g.thermal_time = ThermalTimeIncrement(config, weather.tmax, weather.tmin);
  g.d_biomass = BiomassIncrement(config, crop.lai, weather.srad, stress);
  if (flowered) {
    g.d_lai = -config.lai_senescence_rate * g.thermal_time * crop.lai;
    g.d_grain = config.grain_partition * g.d_biomass;
  } else {
    g.d_lai = config.lai_growth_rate * g.thermal_time * crop.lai *
              (1.0 - crop.lai / config.lai_max) * stress;
  }
  crop.lai = std::max(0.0, crop.lai + g.d_lai);
  crop.biomass += g.d_biomass;
  crop.grain += g.d_grain;
  crop.cum_thermal_time += g.thermal_time;
  crop.growth_stage = GrowthStageFor(config, crop.cum_thermal_time);
  crop.root_depth = std::min(config.root_max_cm, crop.root_depth + config.root_growth_cm);
  return g;
}

Env::Env(const EnvConfig& config, std::uint64_t seed)
    : config_(config), weather_(config, seed) {
  ValidateEnvConfig(config_);
}

int Env::DayOfYear(int days_after_planting) const {
  return (config_.planting_doy - 1 + days_after_planting) % 365 + 1;
}

CropState Env::Reset() {
  active_ = true;
  done_ = false;
  dap_ = 0;
  storage_ = config_.field_capacity * config_.soil_depth_mm;
  pool_ = config_.initial_nitrate;
  crop_ = CropStatus{};
  crop_.lai = config_.lai_initial;
  crop_.root_depth = config_.root_initial_cm;
  water_stress_ = 1.0;
  nitrogen_stress_ = 1.0;
  cum_uptake_ = 0.0;
  ledger_ = EnvLedger{};
  ledger_.initial_storage = storage_;
  ledger_.initial_pool = pool_;
  last_water_ = WaterFluxes{};
  last_nitrogen_ = NitrogenFluxes{};

  weather_.Reset();
  Publish(weather_.Next(DayOfYear(0)));
  return state_;
}

StepResult Env::Step(int action) { return StepDose(DecodeAction(action)); }

StepResult Env::StepDose(const ActionDose& dose) {
  if (!active_) throw StateError("step called before reset");
  if (done_) throw StateError("step called after the episode finished");
  if (!(dose.n_dose >= 0.0) || !(dose.water_dose >= 0.0) ||
      !std::isfinite(dose.n_dose) || !std::isfinite(dose.water_dose)) {
    throw DomainError("doses must be finite and non-negative");
  }

  ++dap_;
  const WeatherDay day = weather_.Next(DayOfYear(dap_));

  const double et0 = ReferenceEt(config_, day.tmax, day.tmin, day.srad);
  last_water_ = WaterBalanceStep(config_, storage_, crop_.lai, et0, day.rain,
                                 dose.water_dose);
  storage_ = last_water_.storage_after;
  water_stress_ = last_water_.water_stress;

  const double potential =
      BiomassIncrement(config_, crop_.lai, day.srad, water_stress_);
  const double required = config_.n_crit_conc * (crop_.biomass + potential);
  const double demand =
      std::clamp(required - cum_uptake_, 0.0, config_.max_n_uptake);
  last_nitrogen_ = NitrogenBalanceStep(config_, pool_, dose.n_dose,
                                       last_water_.drainage, demand);
  pool_ = last_nitrogen_.pool_after;
  cum_uptake_ += last_nitrogen_.uptake;
  nitrogen_stress_ =
      required > 0.0 ? std::clamp(cum_uptake_ / required, 0.0, 1.0) : 1.0;

  GrowthStep(config_, crop_, day, water_stress_, nitrogen_stress_);

  ledger_.rain += day.rain;
  ledger_.irrigation += dose.water_dose;
  ledger_.et += last_water_.et;
  ledger_.drainage += last_water_.drainage;
  ledger_.runoff += last_water_.runoff;
  ledger_.n_applied += dose.n_dose;
  ledger_.mineralized += last_nitrogen_.mineralized;
  ledger_.leached += last_nitrogen_.leached;
  ledger_.uptake += last_nitrogen_.uptake;

  Publish(day);

  done_ = crop_.cum_thermal_time >= config_.tt_maturity ||
          dap_ >= config_.season_max_days;

  StepResult result;
  result.state = state_;
  result.done = done_;
  result.reward.n_applied = dose.n_dose;
  result.reward.water_applied = dose.water_dose;
  result.reward.nitrate_leached = last_nitrogen_.leached;
  result.reward.yield_at_harvest = done_ ? crop_.grain : 0.0;
  return result;
}

void Env::Publish(const WeatherDay& day) {
  CropState& s = state_;
  s[kDaysAfterPlanting] = dap_;
  s[kTmax] = day.tmax;
  s[kTmin] = day.tmin;
  s[kSrad] = day.srad;
  s[kRain] = day.rain;
  s[kSoilWater] = storage_ / config_.soil_depth_mm;
  s[kCumRain] = ledger_.rain;
  s[kCumIrrigation] = ledger_.irrigation;
  s[kCumNApplied] = ledger_.n_applied;
  s[kSoilNitrate] = pool_;
  s[kCumNitrateLeached] = ledger_.leached;
  s[kDailyNitrateLeached] = last_nitrogen_.leached;
  s[kCumPlantNUptake] = ledger_.uptake;
  s[kLeafAreaIndex] = crop_.lai;
  s[kBiomass] = crop_.biomass;
  s[kRootDepth] = crop_.root_depth;
  s[kGrowthStage] = crop_.growth_stage;
  s[kCumThermalTime] = crop_.cum_thermal_time;
  s[kWaterStress] = water_stress_;
  s[kNitrogenStress] = nitrogen_stress_;
  s[kDailyEt] = last_water_.et;
  s[kDailyDrainage] = last_water_.drainage;
  s[kGrainWeight] = crop_.grain;
  s[kDayOfYear] = DayOfYear(dap_);
  s[kForecastRain] = day.forecast_rain;
}

}  // namespace maskq
