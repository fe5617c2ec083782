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
#include "maskq/eval.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "maskq/errors.h"
#include "maskq/train.h"

namespace maskq {
namespace {

NoiseSpec Named(const std::string& name) {
  NoiseSpec s;
  s.name = name;
  if (name == "none") return s;
  if (name == "sw002") { s.soil_water = 0.02; return s; }
  if (name == "sw005") { s.soil_water = 0.05; return s; }
  if (name == "temp1") { s.temperature = 1.0; return s; }
  if (name == "temp2") { s.temperature = 2.0; return s; }
  if (name == "srad2") { s.solar_radiation = 0.02; return s; }
  if (name == "srad10") { s.solar_radiation = 0.10; return s; }
  if (name == "rain90") { s.rain_accuracy = 0.90; return s; }
  if (name == "lai10") { s.leaf_area_index = 0.10; return s; }
  if (name == "lai20") { s.leaf_area_index = 0.20; return s; }
  if (name == "combined") {
    s.soil_water = 0.02;
    s.temperature = 2.0;
    s.solar_radiation = 0.02;
    s.rain_accuracy = 0.90;
    s.leaf_area_index = 0.20;
    return s;
  }
  throw ConfigError("unknown noise spec '" + name + "'");
}

double Mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * (i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

bool NoiseSpec::IsZero() const {
  return soil_water == 0.0 && temperature == 0.0 && solar_radiation == 0.0 &&
         rain_accuracy == 1.0 && leaf_area_index == 0.0;
}

void ValidateNoiseSpec(const NoiseSpec& s) {
  if (!(s.soil_water >= 0) || !(s.temperature >= 0) || !(s.solar_radiation >= 0) ||
      !(s.leaf_area_index >= 0)) {
    throw ConfigError("noise magnitudes must be >= 0");
  }
  if (!(s.rain_accuracy > 0 && s.rain_accuracy <= 1)) {
    throw ConfigError("rain_accuracy must be in (0, 1]");
  }
  if (s.solar_radiation > 1 || s.leaf_area_index > 1) {
    throw ConfigError("relative noise magnitudes must be <= 1");
  }
}

std::vector<std::string> NoiseSpecNames() {
  return {"none",   "sw002",  "sw005", "temp1", "temp2",   "srad2",
          "srad10", "rain90", "lai10", "lai20", "combined"};
}

NoiseSpec ParseNoiseSpec(const std::string& text) {
  if (text.find('=') == std::string::npos) {
    NoiseSpec s = Named(text);
    ValidateNoiseSpec(s);
    return s;
  }
  NoiseSpec s;
  s.name = text;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("bad noise entry '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), x);
    if (ec != std::errc() || ptr != val.data() + val.size()) {
      throw ConfigError("bad noise magnitude '" + val + "' for " + key);
    }
    if (key == "soil_water") s.soil_water = x;
    else if (key == "temperature") s.temperature = x;
    else if (key == "solar_radiation") s.solar_radiation = x;
    else if (key == "rain_accuracy") s.rain_accuracy = x;
    else if (key == "leaf_area_index") s.leaf_area_index = x;
    else throw ConfigError("unknown noise variable '" + key + "'");
  }
  ValidateNoiseSpec(s);
  return s;
}

std::string DescribeNoise(const NoiseSpec& s) {
  std::vector<std::string> parts;
  if (s.soil_water != 0) parts.push_back("soil_water=" + FormatNumber(s.soil_water));
  if (s.temperature != 0) parts.push_back("temperature=" + FormatNumber(s.temperature));
  if (s.solar_radiation != 0) {
    parts.push_back("solar_radiation=" + FormatNumber(s.solar_radiation));
  }
  if (s.rain_accuracy != 1) parts.push_back("rain_accuracy=" + FormatNumber(s.rain_accuracy));
  if (s.leaf_area_index != 0) {
    parts.push_back("leaf_area_index=" + FormatNumber(s.leaf_area_index));
  }
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : ";") + p;
  return out.empty() ? "none" : out;
}

std::string NoiseVariables(const NoiseSpec& s) {
  std::string out;
  auto add = [&out](bool on, const char* name) {
    if (on) out += (out.empty() ? "" : "+") + std::string(name);
  };
  add(s.soil_water != 0, "soil_water");
  add(s.temperature != 0, "temperature");
  add(s.solar_radiation != 0, "solar_radiation");
  add(s.rain_accuracy != 1, "rainfall");
  add(s.leaf_area_index != 0, "leaf_area_index");
  return out.empty() ? "none" : out;
}

CropState PerturbObservation(const CropState& truth, const NoiseSpec& s, const EnvConfig& env,
                             Rng& rng) {
  CropState obs = truth;
  obs[kSoilWater] = std::clamp(obs[kSoilWater] + rng.Uniform(-s.soil_water, s.soil_water), 0.0,
                               env.theta_sat);
  obs[kTmax] += rng.Uniform(-s.temperature, s.temperature);
  obs[kTmin] += rng.Uniform(-s.temperature, s.temperature);
  obs[kSrad] = std::max(
      0.0, obs[kSrad] * rng.Uniform(1.0 - s.solar_radiation, 1.0 + s.solar_radiation));
  if (rng.Bernoulli(1.0 - s.rain_accuracy)) {
    obs[kRain] = WeatherGenerator::SampleRain(env, rng);
  }
  obs[kLeafAreaIndex] = std::max(
      0.0, obs[kLeafAreaIndex] * rng.Uniform(1.0 - s.leaf_area_index, 1.0 + s.leaf_area_index));
  return obs;
}

MaskChannel MaskChannel::Ratio(double alpha) {
  MaskChannel c;
  c.alpha = alpha;
  return c;
}

MaskChannel MaskChannel::Fixed(const Mask& mask) {
  MaskChannel c;
  c.fixed = true;
  c.mask = mask;
  c.alpha = mask.alpha();
  return c;
}

Stat Summarize(const std::vector<double>& values) {
  Stat s;
  s.n = static_cast<int>(values.size());
  s.mean = Mean(values);
  if (s.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (s.n - 1));
  }
  return s;
}

std::vector<double> EvalReport::Column(
    const std::function<double(const EpisodeReport&)>& get) const {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& r : runs) out.push_back(get(r));
  return out;
}

std::vector<double> EvalReport::Rf(int preset) const {
  return Column([preset](const EpisodeReport& r) { return r.rf.at(preset - 1); });
}

Stat EvalReport::RfStat(int preset) const { return Summarize(Rf(preset)); }

EpisodeReport RunEpisode(const EnvConfig& env_config, const FeatureRanges& ranges,
                         std::uint64_t env_seed, const Policy& policy, const MaskChannel& channel,
                         const NoiseSpec& noise, Rng& mask_rng, Rng& noise_rng,
                         EpisodeTrace* trace) {
  const auto presets = AllRewardPresets();
  Env env(env_config, env_seed);
  CropState state = env.Reset();
  if (trace != nullptr) trace->states.push_back(state);
  EpisodeReport report;
  report.seed = env_seed;
  bool done = false;
  while (!done) {
    const CropState observed = PerturbObservation(state, noise, env_config, noise_rng);
    const Mask mask = channel.fixed ? channel.mask : SampleMask(channel.alpha, channel.alpha, mask_rng);
    const TokenSequence obs = ApplyMask(NormalizeState(observed, ranges), mask);
    const int action = policy(obs, report.steps);
    const StepResult step = env.Step(action);
    done = step.done;
    ++report.steps;
    for (int k = 0; k < kNumRewardPresets; ++k) {
      report.rf[k] += ComputeReward(step.reward, presets[k], done);
    }
    report.n_total += step.reward.n_applied;
    report.w_total += step.reward.water_applied;
    report.leach_total += step.reward.nitrate_leached;
    if (done) report.yield = step.reward.yield_at_harvest;
    state = step.state;
    if (trace != nullptr) {
      trace->states.push_back(state);
      trace->actions.push_back(action);
      trace->rewards.push_back(step.reward);
    }
  }
  return report;
}

EvalReport EvaluatePolicyFn(const Policy& policy, const FeatureRanges& ranges,
                            const EnvConfig& env, int episodes, const MaskChannel& channel,
                            const NoiseSpec& noise, std::uint64_t seed) {
  if (episodes < 1) throw DomainError("evaluation needs at least one episode");
  ValidateNoiseSpec(noise);
  EvalReport report;
  for (int i = 0; i < episodes; ++i) {
    Rng mask_rng(DeriveSeed(seed, kStreamMask, i));
    Rng noise_rng(DeriveSeed(seed, kStreamNoise, i));
    EpisodeReport r = RunEpisode(env, ranges, EpisodeSeed(env, seed, i), policy, channel, noise,
                                 mask_rng, noise_rng);
    r.run_id = i;
    report.runs.push_back(r);
  }
  return report;
}

EvalReport EvaluatePolicy(const QNetwork& net, const FeatureRanges& ranges, const EnvConfig& env,
                          int episodes, const MaskChannel& channel, const NoiseSpec& noise,
                          std::uint64_t seed) {
  const Policy greedy = [&net](const TokenSequence& obs, int) {
    return GreedyAction(net.Forward(obs).q_values);
  };
  return EvaluatePolicyFn(greedy, ranges, env, episodes, channel, noise, seed);
}

void CheckRangesCompatible(const Checkpoint& ckpt, const EnvConfig& env) {
  const FeatureRanges expected = FeatureRangesFor(env);
  for (int f = 0; f < kNumFeatures; ++f) {
    if (ckpt.ranges.lo[f] != expected.lo[f] || ckpt.ranges.hi[f] != expected.hi[f]) {
      throw CompatibilityError("checkpoint normalization for '" + std::string(FeatureName(f)) +
                               "' is [" + FormatNumber(ckpt.ranges.lo[f]) + ", " +
                               FormatNumber(ckpt.ranges.hi[f]) + "], environment implies [" +
                               FormatNumber(expected.lo[f]) + ", " +
                               FormatNumber(expected.hi[f]) + "]");
    }
  }
}

EvalReport EvaluateCheckpoint(const Checkpoint& ckpt, const EnvConfig& env, int episodes,
                              const MaskChannel& channel, const NoiseSpec& noise,
                              std::uint64_t seed) {
  CheckRangesCompatible(ckpt, env);
  auto net = RestoreNetwork(ckpt);
  return EvaluatePolicy(*net, ckpt.ranges, env, episodes, channel, noise, seed);
}

EvalReport EvaluateRandomPolicy(const EnvConfig& env, int episodes, std::uint64_t seed) {
  if (episodes < 1) throw DomainError("evaluation needs at least one episode");
  const FeatureRanges ranges = FeatureRangesFor(env);
  EvalReport report;
  for (int i = 0; i < episodes; ++i) {
    Rng action_rng(DeriveSeed(seed, kStreamPolicy, i));
    Rng mask_rng(DeriveSeed(seed, kStreamMask, i));
    Rng noise_rng(DeriveSeed(seed, kStreamNoise, i));
    const Policy random = [&action_rng](const TokenSequence&, int) {
      return action_rng.UniformInt(0, kNumActions - 1);
    };
    EpisodeReport r = RunEpisode(env, ranges, EpisodeSeed(env, seed, i), random,
                                 MaskChannel::Ratio(0.0), NoiseSpec{}, mask_rng, noise_rng);
    r.run_id = i;
    report.runs.push_back(r);
  }
  return report;
}

std::vector<double> ParseAlphaList(const std::string& text) {
  auto number = [&text](std::string s) {
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ConfigError("bad alpha list '" + text + "'");
    }
    return x;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw ConfigError("alpha range must be lo:hi:step, got '" + text + "'");
    const double lo = number(parts[0]), hi = number(parts[1]), step = number(parts[2]);
    if (!(step > 0) || hi < lo) throw ConfigError("alpha range needs lo <= hi and step > 0");
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) {
      // Round away accumulated binary error so 0:1:0.1 prints as 0.3, not 0.30000000000000004.
      out.push_back(std::round((lo + i * step) * 1e12) / 1e12);
    }
  } else {
    std::stringstream in(text);
    for (std::string p; std::getline(in, p, ',');) out.push_back(number(p));
  }
  for (double a : out) {
    if (!(a >= 0 && a <= 1)) throw ConfigError("alpha " + FormatNumber(a) + " outside [0, 1]");
  }
  return out;
}

std::vector<SweepRow> PartialObsSweep(const QNetwork& net, const FeatureRanges& ranges,
                                      const EnvConfig& env, const std::vector<double>& alphas,
                                      int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("sweep needs at least one trial");
  const Policy greedy = [&net](const TokenSequence& obs, int) {
    return GreedyAction(net.Forward(obs).q_values);
  };
  std::vector<SweepRow> rows;
  for (double alpha : alphas) {
    if (!(alpha >= 0 && alpha <= 1)) throw DomainError("alpha outside [0, 1]");
    SweepRow row;
    row.alpha = alpha;
    for (int t = 0; t < trials; ++t) {
      Rng trial_rng(DeriveSeed(seed, kStreamMask, t));
      const Mask mask = SampleMask(alpha, alpha, trial_rng);
      Rng unused(0);
      Rng noise_rng(DeriveSeed(seed, kStreamNoise, t));
      const EpisodeReport r = RunEpisode(env, ranges, EpisodeSeed(env, seed, t), greedy,
                                         MaskChannel::Fixed(mask), NoiseSpec{}, unused, noise_rng);
      row.per_trial.push_back(r.rf[0]);
    }
    row.rf1 = Summarize(row.per_trial);
    rows.push_back(std::move(row));
  }
  return rows;
}

double DecreaseRate(double clean, double noisy) {
  return 100.0 * (clean - noisy) / std::abs(clean);
}

NoiseResult NoiseEval(const QNetwork& net, const FeatureRanges& ranges, const EnvConfig& env,
                      const NoiseSpec& spec, int n, std::uint64_t seed) {
  const EvalReport clean = EvaluatePolicy(net, ranges, env, n, MaskChannel::Ratio(0.0),
                                          NoiseSpec{}, seed);
  const EvalReport noisy = EvaluatePolicy(net, ranges, env, n, MaskChannel::Ratio(0.0), spec, seed);
  NoiseResult r;
  r.spec = spec;
  r.n = n;
  r.mean_clean = clean.RfStat(1).mean;
  r.mean_noisy = noisy.RfStat(1).mean;
  r.decrease_rate_pct = DecreaseRate(r.mean_clean, r.mean_noisy);
  return r;
}

FixedSchedule ParseSchedule(const std::string& text, const std::string& name) {
  const CsvTable table = ParseCsv(text);
  const int day_col = table.Column("day");
  const int n_col = table.Column("n");
  const int w_col = table.Column("water");
  int flag_col = -1;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == "off_grid") flag_col = static_cast<int>(i);
  }
  FixedSchedule schedule;
  schedule.name = name;
  auto num = [](const std::string& cell, int line) {
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
      throw FormatError("schedule row " + std::to_string(line) + ": bad number '" + cell + "'");
    }
    return x;
  };
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const int line = static_cast<int>(i) + 1;
    Application a;
    const double day = num(row[day_col], line);
    if (day != std::floor(day)) {
      throw FormatError("schedule row " + std::to_string(line) + ": day must be an integer");
    }
    a.day = static_cast<int>(day);
    a.n_dose = num(row[n_col], line);
    a.water_dose = num(row[w_col], line);
    if (flag_col >= 0) a.off_grid = num(row[flag_col], line) != 0.0;
    schedule.applications.push_back(a);
  }
  return schedule;
}

FixedSchedule LoadSchedule(const std::string& path) {
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return ParseSchedule(ReadFile(path), name);
}

void ValidateSchedule(const FixedSchedule& schedule, const EnvConfig& env) {
  for (const Application& a : schedule.applications) {
    if (a.day < 1 || a.day > env.season_max_days) {
      throw DomainError("schedule day " + std::to_string(a.day) + " outside season 1.." +
                        std::to_string(env.season_max_days));
    }
    if (!(a.n_dose >= 0) || !(a.water_dose >= 0)) {
      throw DomainError("schedule day " + std::to_string(a.day) + " has a negative dose");
    }
    if (!a.off_grid && EncodeAction(ActionDose{a.n_dose, a.water_dose}) < 0) {
      throw DomainError("schedule day " + std::to_string(a.day) + " dose (" +
                        FormatNumber(a.n_dose) + ", " + FormatNumber(a.water_dose) +
                        ") is off the action grid and not flagged off_grid");
    }
  }
}

EvalReport RunFixedSchedule(const FixedSchedule& schedule, const EnvConfig& env_config,
                            std::uint64_t seed, int episodes) {
  ValidateSchedule(schedule, env_config);
  if (episodes < 1) throw DomainError("evaluation needs at least one episode");
  std::map<int, ActionDose> by_day;
  for (const Application& a : schedule.applications) {
    by_day[a.day].n_dose += a.n_dose;
    by_day[a.day].water_dose += a.water_dose;
  }
  const auto presets = AllRewardPresets();
  EvalReport report;
  for (int i = 0; i < episodes; ++i) {
    Env env(env_config, EpisodeSeed(env_config, seed, i));
    env.Reset();
    EpisodeReport r;
    r.run_id = i;
    r.seed = EpisodeSeed(env_config, seed, i);
    bool done = false;
    while (!done) {
      const int day = r.steps + 1;
      const auto it = by_day.find(day);
      const ActionDose dose = it == by_day.end() ? ActionDose{} : it->second;
      const StepResult step = env.StepDose(dose);
      done = step.done;
      ++r.steps;
      for (int k = 0; k < kNumRewardPresets; ++k) {
        r.rf[k] += ComputeReward(step.reward, presets[k], done);
      }
      r.n_total += step.reward.n_applied;
      r.w_total += step.reward.water_applied;
      r.leach_total += step.reward.nitrate_leached;
      if (done) r.yield = step.reward.yield_at_harvest;
    }
    report.runs.push_back(r);
  }
  return report;
}

double Spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("Spearman correlation needs two equal-length series of >= 2 values");
  }
  const std::vector<double> rx = Ranks(x), ry = Ranks(y);
  const double mx = Mean(rx), my = Mean(ry);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

PairedDiff ComparePaired(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw DomainError("paired samples must match in size");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const Stat s = Summarize(d);
  PairedDiff p;
  p.n = s.n;
  p.mean = s.mean;
  p.std_error = s.stddev / std::sqrt(static_cast<double>(s.n));
  p.lower95 = p.mean - 1.6448536269514722 * p.std_error;
  return p;
}

CsvTable TrajectoryTable(const EpisodeTrace& trace) {
  CsvTable t;
  for (int f = 0; f < kNumFeatures; ++f) t.header.emplace_back(FeatureName(f));
  for (const char* c : {"action", "yield_at_harvest", "n_applied", "water_applied",
                        "nitrate_leached"}) {
    t.header.emplace_back(c);
  }
  for (std::size_t i = 0; i < trace.actions.size(); ++i) {
    std::vector<std::string> row;
    for (double v : trace.states.at(i + 1)) row.push_back(FormatNumber(v));
    const RewardComponents& r = trace.rewards[i];
    row.push_back(std::to_string(trace.actions[i]));
    row.push_back(FormatNumber(r.yield_at_harvest));
    row.push_back(FormatNumber(r.n_applied));
    row.push_back(FormatNumber(r.water_applied));
    row.push_back(FormatNumber(r.nitrate_leached));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable EvalTable(const EvalReport& report) {
  CsvTable t;
  t.header = {"run_id",  "seed",        "yield", "n_total", "w_total",
              "leach_total", "rf1", "rf2",   "rf3",     "rf4"};
  for (const auto& r : report.runs) {
    t.rows.push_back({std::to_string(r.run_id), std::to_string(r.seed), FormatNumber(r.yield),
                      FormatNumber(r.n_total), FormatNumber(r.w_total),
                      FormatNumber(r.leach_total), FormatNumber(r.rf[0]), FormatNumber(r.rf[1]),
                      FormatNumber(r.rf[2]), FormatNumber(r.rf[3])});
  }
  return t;
}

CsvTable SweepTable(const std::vector<SweepRow>& rows) {
  CsvTable t;
  t.header = {"alpha", "mean_rf1", "std_rf1", "trials"};
  for (const auto& r : rows) {
    t.rows.push_back({FormatNumber(r.alpha), FormatNumber(r.rf1.mean), FormatNumber(r.rf1.stddev),
                      std::to_string(r.rf1.n)});
  }
  return t;
}

CsvTable NoiseTable(const std::vector<NoiseResult>& rows) {
  CsvTable t;
  t.header = {"variable_set", "magnitudes", "mean_clean", "mean_noisy", "decrease_rate_pct", "n"};
  for (const auto& r : rows) {
    t.rows.push_back({NoiseVariables(r.spec), DescribeNoise(r.spec), FormatNumber(r.mean_clean),
                      FormatNumber(r.mean_noisy), FormatNumber(r.decrease_rate_pct),
                      std::to_string(r.n)});
  }
  return t;
}

}  // namespace maskq
