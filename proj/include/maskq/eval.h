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
#ifndef MASKQ_EVAL_H_
#define MASKQ_EVAL_H_

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "maskq/checkpoint.h"
#include "maskq/csv.h"
#include "maskq/encode.h"
#include "maskq/env.h"
#include "maskq/qnet.h"
#include "maskq/random.h"

namespace maskq {

// Observation noise. Absolute entries perturb by Uniform[-b, b]; relative
// entries multiply by Uniform[1 - b, 1 + b]. With probability
// 1 - rain_accuracy the observed rain is replaced by an independent draw from
// the weather generator's rain distribution.
struct NoiseSpec {
  std::string name = "none";
  double soil_water = 0.0;       // m3/m3, absolute
  double temperature = 0.0;      // degC, absolute, on tmax and tmin
  double solar_radiation = 0.0;  // relative
  double rain_accuracy = 1.0;
  double leaf_area_index = 0.0;  // relative

  bool IsZero() const;
};

void ValidateNoiseSpec(const NoiseSpec& spec);

// Built-in specs: none, sw002, sw005, temp1, temp2, srad2, srad10, rain90,
// lai10, lai20, combined.
std::vector<std::string> NoiseSpecNames();
// A built-in name, or comma-separated "var=value" entries with var one of
// soil_water, temperature, solar_radiation, rain_accuracy, leaf_area_index.
NoiseSpec ParseNoiseSpec(const std::string& text);
// "soil_water=0.05;temperature=2" style listing of the non-zero entries.
std::string DescribeNoise(const NoiseSpec& spec);
// Variables touched by a noise spec, joined with '+'.
std::string NoiseVariables(const NoiseSpec& spec);

CropState PerturbObservation(const CropState& truth, const NoiseSpec& spec,
                             const EnvConfig& env, Rng& rng);

// How an evaluation hides features: a fixed mask, or a fresh mask drawn at
// ratio alpha on every step.
struct MaskChannel {
  bool fixed = false;
  double alpha = 0.0;
  Mask mask = Mask::AllVisible();

  static MaskChannel Ratio(double alpha);
  static MaskChannel Fixed(const Mask& mask);
};

// Maps an observation to an action; `day` counts steps already taken.
using Policy = std::function<int(const TokenSequence& obs, int day)>;

struct EpisodeReport {
  int run_id = 0;
  std::uint64_t seed = 0;
  int steps = 0;
  double yield = 0.0;
  double n_total = 0.0;
  double w_total = 0.0;
  double leach_total = 0.0;
  std::array<double, kNumRewardPresets> rf{};
};

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for fewer than 2 values
  int n = 0;
};

Stat Summarize(const std::vector<double>& values);

struct EvalReport {
  std::vector<EpisodeReport> runs;

  std::vector<double> Column(const std::function<double(const EpisodeReport&)>& get) const;
  std::vector<double> Rf(int preset) const;  // preset in 1..4
  Stat RfStat(int preset) const;
};

// True states (after reset, then after every step), actions and reward
// components of one episode.
struct EpisodeTrace {
  std::vector<CropState> states;
  std::vector<int> actions;
  std::vector<RewardComponents> rewards;
};

// One row per simulated day: the 25 features after the step, the action
// index and the day's reward components.
CsvTable TrajectoryTable(const EpisodeTrace& trace);

// One episode against the true environment; the policy sees the perturbed,
// normalized, masked observation.
EpisodeReport RunEpisode(const EnvConfig& env, const FeatureRanges& ranges, std::uint64_t env_seed,
                         const Policy& policy, const MaskChannel& channel, const NoiseSpec& noise,
                         Rng& mask_rng, Rng& noise_rng, EpisodeTrace* trace = nullptr);

// Episode i uses weather seed EpisodeSeed(env, seed, i) and its own mask and
// noise streams, so runs with equal seeds are matched episode by episode.
EvalReport EvaluatePolicyFn(const Policy& policy, const FeatureRanges& ranges, const EnvConfig& env,
                            int episodes, const MaskChannel& channel, const NoiseSpec& noise,
                            std::uint64_t seed);
// Greedy (epsilon = 0) network policy.
EvalReport EvaluatePolicy(const QNetwork& net, const FeatureRanges& ranges, const EnvConfig& env,
                          int episodes, const MaskChannel& channel, const NoiseSpec& noise,
                          std::uint64_t seed);
// Throws CompatibilityError when the checkpoint's normalization ranges differ
// from the ones implied by `env`.
EvalReport EvaluateCheckpoint(const Checkpoint& ckpt, const EnvConfig& env, int episodes,
                              const MaskChannel& channel, const NoiseSpec& noise,
                              std::uint64_t seed);
void CheckRangesCompatible(const Checkpoint& ckpt, const EnvConfig& env);

// Uniform-random actions, seeded per episode.
EvalReport EvaluateRandomPolicy(const EnvConfig& env, int episodes, std::uint64_t seed);

// "lo:hi:step" (inclusive) or a comma-separated list.
std::vector<double> ParseAlphaList(const std::string& text);

struct SweepRow {
  double alpha = 0.0;
  Stat rf1;
  std::vector<double> per_trial;
};

// Trial t runs one episode on weather seed EpisodeSeed(env, seed, t) with a
// mask fixed for the whole episode, drawn at exactly alpha from a per-trial
// stream. Masks for a trial are nested across alphas.
std::vector<SweepRow> PartialObsSweep(const QNetwork& net, const FeatureRanges& ranges,
                                      const EnvConfig& env, const std::vector<double>& alphas,
                                      int trials, std::uint64_t seed);

struct NoiseResult {
  NoiseSpec spec;
  double mean_clean = 0.0;
  double mean_noisy = 0.0;
  double decrease_rate_pct = 0.0;
  int n = 0;
};

// Percentage drop of noisy relative to clean, measured against abs(clean).
double DecreaseRate(double clean, double noisy);
// Clean and noisy runs share weather seeds; both are fully observed.
NoiseResult NoiseEval(const QNetwork& net, const FeatureRanges& ranges, const EnvConfig& env,
                      const NoiseSpec& spec, int n, std::uint64_t seed);

struct Application {
  int day = 0;  // 1-based days after planting
  double n_dose = 0.0;
  double water_dose = 0.0;
  bool off_grid = false;
};

struct FixedSchedule {
  std::string name;
  std::vector<Application> applications;
};

// CSV with columns day,n,water[,off_grid].
FixedSchedule ParseSchedule(const std::string& text, const std::string& name = "");
FixedSchedule LoadSchedule(const std::string& path);
// DomainError for days outside 1..season_max_days, negative doses, or
// off-grid doses that are not flagged.
void ValidateSchedule(const FixedSchedule& schedule, const EnvConfig& env);
EvalReport RunFixedSchedule(const FixedSchedule& schedule, const EnvConfig& env,
                            std::uint64_t seed, int episodes);

// Spearman rank correlation with average ranks for ties.
double Spearman(const std::vector<double>& x, const std::vector<double>& y);

// Paired difference a - b: mean, standard error and one-sided 95% lower bound.
struct PairedDiff {
  double mean = 0.0;
  double std_error = 0.0;
  double lower95 = 0.0;
  int n = 0;
};
PairedDiff ComparePaired(const std::vector<double>& a, const std::vector<double>& b);

CsvTable EvalTable(const EvalReport& report);
CsvTable SweepTable(const std::vector<SweepRow>& rows);
CsvTable NoiseTable(const std::vector<NoiseResult>& rows);

}  // namespace maskq

#endif  // MASKQ_EVAL_H_
