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
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "maskq/checkpoint.h"
#include "maskq/errors.h"
#include "maskq/eval.h"
#include "maskq/train.h"

namespace maskq {
namespace {

ModelConfig TinyModel() {
  ModelConfig m;
  m.d_model = 8;
  m.layers = 1;
  m.heads = 2;
  m.ffn = 16;
  return m;
}

EnvConfig ShortEnv() {
  EnvConfig e;
  e.season_max_days = 30;
  return e;
}

// Independent Spearman: average ranks, then Pearson on the ranks.
std::vector<double> Ranks(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    r[i] = less + (equal + 1) / 2.0;
  }
  return r;
}

double Pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

void CheckRfIdentity(const EpisodeReport& r) {
  for (int k = 1; k <= kNumRewardPresets; ++k) {
    const RewardWeights w = RewardPreset(k);
    CHECK(r.rf[k - 1] == doctest::Approx(w.w1 * r.yield - w.w2 * r.n_total - w.w3 * r.w_total -
                                         w.w4 * r.leach_total));
  }
}

TEST_SUITE("eval") {

TEST_CASE("episode returns decompose into totals") {
  const EnvConfig env = ShortEnv();
  const EvalReport rep = EvaluateRandomPolicy(env, 5, 3);
  REQUIRE(rep.runs.size() == 5);
  for (const EpisodeReport& r : rep.runs) CheckRfIdentity(r);
  const EvalReport again = EvaluateRandomPolicy(env, 5, 3);
  CHECK(again.Rf(1) == rep.Rf(1));
  CHECK(EvaluateRandomPolicy(env, 5, 4).Rf(1) != rep.Rf(1));
}

TEST_CASE("fixed schedules echo their totals") {
  const FixedSchedule s = ParseSchedule("day,n,water,off_grid\n3,40,6,0\n10,55,18,1\n10,5,0,1\n");
  const EnvConfig env = NoiseFreeEnvConfig();
  const EvalReport rep = RunFixedSchedule(s, env, 1, 2);
  for (const EpisodeReport& r : rep.runs) {
    CHECK(r.n_total == doctest::Approx(100.0));
    CHECK(r.w_total == doctest::Approx(24.0));
    CheckRfIdentity(r);
  }
  const EvalReport empty = RunFixedSchedule(FixedSchedule{"empty", {}}, env, 1, 1);
  CHECK(empty.runs[0].n_total == 0.0);
  CHECK(empty.runs[0].w_total == 0.0);
  CHECK(empty.runs[0].yield > 0.0);
  CHECK(empty.runs[0].rf[0] == doctest::Approx(0.158 * empty.runs[0].yield));
}

TEST_CASE("schedule validation") {
  const EnvConfig env = ShortEnv();
  CHECK_THROWS_AS(ValidateSchedule(ParseSchedule("day,n,water\n31,0,0\n"), env), DomainError);
  CHECK_THROWS_AS(ValidateSchedule(ParseSchedule("day,n,water\n0,0,0\n"), env), DomainError);
  CHECK_THROWS_AS(ValidateSchedule(ParseSchedule("day,n,water\n4,-1,0\n"), env), DomainError);
  CHECK_THROWS_AS(ValidateSchedule(ParseSchedule("day,n,water\n4,41,0\n"), env), DomainError);
  CHECK_NOTHROW(ValidateSchedule(ParseSchedule("day,n,water,off_grid\n4,41,0,1\n"), env));
  CHECK_THROWS_AS(RunFixedSchedule(ParseSchedule("day,n,water\n31,0,0\n"), env, 1, 1), DomainError);
  CHECK_THROWS_AS(ParseSchedule("day,n\n1,2\n"), FormatError);
}

TEST_CASE("noise specs") {
  for (const std::string& name : NoiseSpecNames()) CHECK_NOTHROW(ParseNoiseSpec(name));
  CHECK(ParseNoiseSpec("none").IsZero());
  const NoiseSpec combined = ParseNoiseSpec("combined");
  CHECK(combined.soil_water == 0.02);
  CHECK(combined.temperature == 2.0);
  CHECK(combined.solar_radiation == 0.02);
  CHECK(combined.rain_accuracy == 0.9);
  CHECK(combined.leaf_area_index == 0.2);
  const NoiseSpec custom = ParseNoiseSpec("soil_water=0.05,temperature=1");
  CHECK(custom.soil_water == 0.05);
  CHECK(custom.temperature == 1.0);
  CHECK(custom.solar_radiation == 0.0);
  CHECK_THROWS(ParseNoiseSpec("nonsense"));
  NoiseSpec bad;
  bad.rain_accuracy = 1.5;
  CHECK_THROWS(ValidateNoiseSpec(bad));
}

TEST_CASE("noise touches only its own features") {
  const EnvConfig env;
  Env e(env, 5);
  CropState s = e.Reset();
  for (int i = 0; i < 30; ++i) s = e.Step(6).state;
  struct Case {
    const char* spec;
    std::vector<int> features;
  };
  const std::vector<Case> cases = {{"sw005", {kSoilWater}},
                                   {"temp2", {kTmax, kTmin}},
                                   {"srad10", {kSrad}},
                                   {"lai20", {kLeafAreaIndex}}};
  Rng rng(1);
  for (const Case& c : cases) {
    const CropState noisy = PerturbObservation(s, ParseNoiseSpec(c.spec), env, rng);
    for (int f = 0; f < kNumFeatures; ++f) {
      const bool target =
          std::find(c.features.begin(), c.features.end(), f) != c.features.end();
      INFO(c.spec << " feature " << f);
      if (target) {
        CHECK(noisy[f] != s[f]);
      } else {
        CHECK(noisy[f] == s[f]);
      }
    }
  }
  CHECK(PerturbObservation(s, NoiseSpec{}, env, rng) == s);
  NoiseSpec sw;
  sw.soil_water = 10.0;
  const CropState clamped = PerturbObservation(s, sw, env, rng);
  CHECK(clamped[kSoilWater] >= 0.0);
  CHECK(clamped[kSoilWater] <= env.theta_sat);
}

TEST_CASE("zero noise gives a decrease rate of exactly zero") {
  auto net = MakeNetwork(TinyModel(), 3);
  const EnvConfig env = ShortEnv();
  const NoiseResult r = NoiseEval(*net, FeatureRangesFor(env), env, NoiseSpec{}, 8, 2);
  CHECK(r.decrease_rate_pct == 0.0);
  CHECK(r.mean_clean == r.mean_noisy);
  CHECK(r.n == 8);
  CHECK(DecreaseRate(1000, 900) == doctest::Approx(10.0));
  CHECK(DecreaseRate(-100, -150) == doctest::Approx(50.0));
  CHECK(DecreaseRate(-100, -80) == doctest::Approx(-20.0));
}

TEST_CASE("noise on a hidden feature has no effect") {
  auto net = MakeNetwork(TinyModel(), 3);
  const EnvConfig env = ShortEnv();
  const FeatureRanges ranges = FeatureRangesFor(env);
  const MaskChannel hide = MaskChannel::Fixed(Mask::Hiding({kSoilWater}));
  const EvalReport clean = EvaluatePolicy(*net, ranges, env, 6, hide, NoiseSpec{}, 7);
  const EvalReport noisy = EvaluatePolicy(*net, ranges, env, 6, hide, ParseNoiseSpec("sw005"), 7);
  CHECK(clean.Rf(1) == noisy.Rf(1));
}

TEST_CASE("single-alpha sweep matches direct evaluation") {
  auto net = MakeNetwork(TinyModel(), 4);
  const EnvConfig env = ShortEnv();
  const FeatureRanges ranges = FeatureRangesFor(env);
  const auto rows = PartialObsSweep(*net, ranges, env, {0.0}, 6, 9);
  REQUIRE(rows.size() == 1);
  const EvalReport direct = EvaluatePolicy(*net, ranges, env, 6, MaskChannel::Ratio(0.0),
                                           NoiseSpec{}, 9);
  CHECK(rows[0].per_trial == direct.Rf(1));
  CHECK(rows[0].rf1.mean == doctest::Approx(direct.RfStat(1).mean));
  CHECK(SweepTable(rows).rows.size() == 1);
}

TEST_CASE("alpha lists") {
  const auto grid = ParseAlphaList("0:1:0.1");
  REQUIRE(grid.size() == 11);
  CHECK(grid.front() == 0.0);
  CHECK(grid[3] == 0.3);
  CHECK(grid.back() == 1.0);
  CHECK(ParseAlphaList("0.2, 0.5") == std::vector<double>{0.2, 0.5});
  CHECK_THROWS(ParseAlphaList("0:1:0"));
  CHECK_THROWS(ParseAlphaList("0.5,1.5"));
  CHECK_THROWS(ParseAlphaList("abc"));
}

TEST_CASE("statistics") {
  const std::vector<double> x = {1, 2, 2, 3, 7, 5};
  const std::vector<double> y = {1, 3, 2, 4, 4, 9};
  CHECK(Spearman(x, y) == doctest::Approx(Pearson(Ranks(x), Ranks(y))).epsilon(1e-12));
  CHECK(Spearman({1, 2, 3}, {9, 5, 1}) == doctest::Approx(-1.0));
  CHECK_THROWS(Spearman({1, 2}, {1}));

  const Stat s = Summarize({2, 4, 4, 4, 5, 5, 7, 9});
  CHECK(s.mean == 5.0);
  CHECK(s.stddev == doctest::Approx(std::sqrt(32.0 / 7.0)));
  CHECK(Summarize({3}).stddev == 0.0);

  const PairedDiff d = ComparePaired({3, 5, 7, 9}, {1, 2, 3, 4});
  // Differences 2, 3, 4, 5: mean 3.5, sample sd sqrt(5/3).
  CHECK(d.mean == doctest::Approx(3.5));
  CHECK(d.std_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(d.lower95 == doctest::Approx(3.5 - 1.6448536269514722 * std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(d.n == 4);
}

TEST_CASE("checkpoints are checked against the evaluation environment") {
  RunConfig c;
  c.env = ShortEnv();
  c.train.episodes = 0;
  c.train.model = TinyModel();
  c.train.verbose = false;
  const Checkpoint ckpt = Train(c, "").checkpoint;
  CHECK_NOTHROW(CheckRangesCompatible(ckpt, c.env));
  CHECK(EvaluateCheckpoint(ckpt, c.env, 2, MaskChannel::Ratio(0.2), NoiseSpec{}, 1).runs.size() == 2);
  EnvConfig other = c.env;
  other.theta_sat = 0.5;
  try {
    CheckRangesCompatible(ckpt, other);
    FAIL("expected CompatibilityError");
  } catch (const CompatibilityError& e) {
    CHECK(std::string(e.what()).find("soil_water") != std::string::npos);
  }
}

TEST_CASE("trajectory and summary tables") {
  const EnvConfig env = ShortEnv();
  const FeatureRanges ranges = FeatureRangesFor(env);
  Rng mask_rng(1), noise_rng(2);
  EpisodeTrace trace;
  const EpisodeReport r = RunEpisode(env, ranges, 5, [](const TokenSequence&, int) { return 6; },
                                     MaskChannel::Ratio(0.0), NoiseSpec{}, mask_rng, noise_rng,
                                     &trace);
  CHECK(trace.actions.size() == static_cast<std::size_t>(r.steps));
  const CsvTable t = TrajectoryTable(trace);
  CHECK(t.header.size() == kNumFeatures + 5);
  CHECK(t.rows.size() == static_cast<std::size_t>(r.steps));
  EvalReport rep;
  rep.runs = {r};
  CHECK(EvalTable(rep).header.size() == 10);
}

}  // TEST_SUITE

}  // namespace
}  // namespace maskq
