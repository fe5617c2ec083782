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

#ifndef MASKQ_ENV_H_
#define MASKQ_ENV_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "maskq/random.h"

namespace maskq {

inline constexpr int kNumFeatures = 25;
inline constexpr int kNumActions = 25;

// Canonical feature order of the daily crop state.
enum Feature : int {
  kDaysAfterPlanting = 0,
  kTmax = 1,
  kTmin = 2,
  kSrad = 3,
  kRain = 4,
  kSoilWater = 5,
  kCumRain = 6,
  kCumIrrigation = 7,
  kCumNApplied = 8,
  kSoilNitrate = 9,
  kCumNitrateLeached = 10,
  kDailyNitrateLeached = 11,
  kCumPlantNUptake = 12,
  kLeafAreaIndex = 13,
  kBiomass = 14,
  kRootDepth = 15,
  kGrowthStage = 16,
  kCumThermalTime = 17,
  kWaterStress = 18,
  kNitrogenStress = 19,
  kDailyEt = 20,
  kDailyDrainage = 21,
  kGrainWeight = 22,
  kDayOfYear = 23,
  kForecastRain = 24,
};

std::string_view FeatureName(int index);

// Fully observed daily state, indexed by Feature. Units are physical
// (see FeatureName for the list).
using CropState = std::array<double, kNumFeatures>;

// Decoded action: nitrogen in kg/ha, irrigation in L/m^2 (= mm).
struct ActionDose {
  double n_dose = 0.0;
  double water_dose = 0.0;

  bool operator==(const ActionDose&) const = default;
};

// Index layout is row-major: nitrogen level outer, water level inner.
ActionDose DecodeAction(int index);
// Inverse of DecodeAction; returns -1 when the dose is off the action grid.
int EncodeAction(const ActionDose& dose);

struct RewardComponents {
  double yield_at_harvest = 0.0;  // kg/ha, non-zero only on the done step
  double n_applied = 0.0;         // kg/ha
  double water_applied = 0.0;     // L/m^2
  double nitrate_leached = 0.0;   // kg/ha
};

struct RewardWeights {
  double w1 = 0.0;  // yield
  double w2 = 0.0;  // nitrogen
  double w3 = 0.0;  // water
  double w4 = 0.0;  // leaching
};

inline constexpr int kNumRewardPresets = 4;

// Presets RF1..RF4 (1-based). RF1 is economic profit; RF2 prices water at
// zero, RF3 prices nitrogen at zero, RF4 doubles the nitrogen price.
RewardWeights RewardPreset(int rf);
std::array<RewardWeights, kNumRewardPresets> AllRewardPresets();

double ComputeReward(const RewardComponents& rc, const RewardWeights& w,
                     bool is_harvest);

struct EnvConfig {
  int season_max_days = 160;
  int planting_doy = 100;

  // Soil bucket.
  double soil_depth_mm = 1000.0;
  double theta_sat = 0.45;
  double field_capacity = 0.30;
  double critical_sw = 0.20;
  double wilting_point = 0.12;
  double k_drain = 0.5;       // fraction of water above field capacity lost per day
  double rain_cap_mm = 60.0;  // daily infiltration capacity for rain

  // Nitrate pool.
  double initial_nitrate = 20.0;     // kg/ha
  double mineralization_rate = 0.5;  // kg/ha/day
  double k_leach = 0.3;
  double d_half_mm = 10.0;
  double n_crit_conc = 0.010;  // kg N per kg biomass
  double max_n_uptake = 6.0;   // kg/ha/day

  // Phenology and growth.
  double base_temp = 8.0;
  double tt_flowering = 900.0;
  double tt_maturity = 1600.0;
  double radiation_use_efficiency = 1.8;  // g/MJ
  double canopy_k = 0.6;
  double lai_initial = 0.05;
  double lai_max = 5.5;
  double lai_growth_rate = 0.01;       // per degree-day
  double lai_senescence_rate = 0.001;  // per degree-day after flowering
  double grain_partition = 0.8;
  double root_initial_cm = 10.0;
  double root_growth_cm = 1.5;  // cm/day
  double root_max_cm = 100.0;

  // Reference evapotranspiration: et0 = a * srad * (tmean + b).
  double et0_rad_coef = 0.0065;
  double et0_temp_offset = 17.8;

  // Weather generator.
  double temp_mean = 26.0;
  double temp_amplitude = 6.0;
  double temp_phase_doy = 105.0;
  double temp_sigma = 2.0;
  double diurnal_range = 11.0;
  double diurnal_sigma = 1.0;
  double srad_mean = 18.0;
  double srad_amplitude = 5.0;
  double srad_sigma = 3.0;
  double p_wet = 0.3;
  double rain_shape = 0.8;
  double rain_scale_mm = 12.0;

  std::uint64_t rng_seed = 0;
};

// Throws ConfigError naming the first violated constraint.
void ValidateEnvConfig(const EnvConfig& config);

// Default config with all weather noise removed and no rain.
EnvConfig NoiseFreeEnvConfig();

struct WeatherDay {
  double tmax = 0.0;
  double tmin = 0.0;
  double srad = 0.0;
  double rain = 0.0;
  double forecast_rain = 0.0;  // tomorrow's rain, already drawn
};

// Seasonal sinusoid plus Gaussian noise for temperature and radiation;
// wet/dry occurrence with gamma-distributed rain amounts.
class WeatherGenerator {
 public:
  WeatherGenerator(const EnvConfig& config, std::uint64_t seed);

  // Starts a new season: pre-draws the rain of the first generated day.
  void Reset();
  WeatherDay Next(int day_of_year);

  // One independent draw from the rain distribution, from a caller stream.
  static double SampleRain(const EnvConfig& config, Rng& rng);

  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }
  double pending_rain() const { return pending_rain_; }
  void set_pending_rain(double rain) { pending_rain_ = rain; }

 private:
  EnvConfig config_;
  Rng rng_;
  double pending_rain_ = 0.0;
};

double ReferenceEt(const EnvConfig& config, double tmax, double tmin,
                   double srad);
double CanopyCover(const EnvConfig& config, double lai);
double WaterStressFactor(const EnvConfig& config, double soil_water);

struct WaterFluxes {
  double storage_before = 0.0;  // mm
  double storage_after = 0.0;   // mm
  double infiltration = 0.0;
  double et = 0.0;
  double drainage = 0.0;
  double runoff = 0.0;
  double water_stress = 1.0;  // 1 = unstressed
};

// One day of the bucket model. Exactly
//   storage_after = storage_before + infiltration - et - drainage
// with runoff already excluded from infiltration.
WaterFluxes WaterBalanceStep(const EnvConfig& config, double storage_mm,
                             double lai, double et0, double rain,
                             double irrigation);

struct NitrogenFluxes {
  double pool_before = 0.0;
  double pool_before_losses = 0.0;
  double pool_after = 0.0;
  double mineralized = 0.0;
  double leached = 0.0;
  double uptake = 0.0;
};

NitrogenFluxes NitrogenBalanceStep(const EnvConfig& config, double pool,
                                   double n_applied, double drainage,
                                   double demand);

// Crop variables advanced by GrowthStep.
struct CropStatus {
  double lai = 0.0;
  double biomass = 0.0;
  double grain = 0.0;
  double cum_thermal_time = 0.0;
  double root_depth = 0.0;
  int growth_stage = 0;
};

double ThermalTimeIncrement(const EnvConfig& config, double tmax, double tmin);
// Daily biomass gain in kg/ha for a given combined stress factor.
double BiomassIncrement(const EnvConfig& config, double lai, double srad,
                        double stress);
int GrowthStageFor(const EnvConfig& config, double cum_thermal_time);

struct GrowthFluxes {
  double thermal_time = 0.0;
  double d_lai = 0.0;
  double d_biomass = 0.0;
  double d_grain = 0.0;
};

GrowthFluxes GrowthStep(const EnvConfig& config, CropStatus& crop,
                        const WeatherDay& weather, double water_stress,
                        double nitrogen_stress);

struct StepResult {
  CropState state{};
  RewardComponents reward;
  bool done = false;
};

// Season totals used by the conservation checks.
struct EnvLedger {
  double initial_storage = 0.0;
  double initial_pool = 0.0;
  double rain = 0.0;
  double irrigation = 0.0;
  double et = 0.0;
  double drainage = 0.0;
  double runoff = 0.0;
  double n_applied = 0.0;
  double mineralized = 0.0;
  double leached = 0.0;
  double uptake = 0.0;
};

// Single-season surrogate maize simulator. Not thread-safe; independent
// instances share nothing.
class Env {
 public:
  Env(const EnvConfig& config, std::uint64_t seed);

  CropState Reset();
  StepResult Step(int action);
  // Applies arbitrary non-negative doses (fixed schedules may leave the grid).
  StepResult StepDose(const ActionDose& dose);

  const CropState& state() const { return state_; }
  bool active() const { return active_; }
  bool done() const { return done_; }
  const EnvConfig& config() const { return config_; }
  const EnvLedger& ledger() const { return ledger_; }
  const WaterFluxes& last_water() const { return last_water_; }
  const NitrogenFluxes& last_nitrogen() const { return last_nitrogen_; }
  double storage_mm() const { return storage_; }
  double nitrate_pool() const { return pool_; }
  WeatherGenerator& weather() { return weather_; }

 private:
  int DayOfYear(int days_after_planting) const;
  void Publish(const WeatherDay& day);

  EnvConfig config_;
  WeatherGenerator weather_;
  CropState state_{};
  bool active_ = false;
  bool done_ = false;
  int dap_ = 0;
  double storage_ = 0.0;
  double pool_ = 0.0;
  CropStatus crop_;
  double water_stress_ = 1.0;
  double nitrogen_stress_ = 1.0;
  double cum_uptake_ = 0.0;
  EnvLedger ledger_;
  WaterFluxes last_water_;
  NitrogenFluxes last_nitrogen_;
};

}  // namespace maskq

#endif  // MASKQ_ENV_H_
