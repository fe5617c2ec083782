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
#include "maskq/train.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "maskq/adam.h"
#include "maskq/csv.h"
#include "maskq/errors.h"
#include "maskq/loss.h"
#include "maskq/replay.h"

namespace maskq {

std::uint64_t EpisodeSeed(const EnvConfig& env, std::uint64_t run_seed, std::uint64_t index) {
  return DeriveSeed(DeriveSeed(run_seed, env.rng_seed), kStreamEnv, index);
}

int GreedyAction(const std::array<double, kNumActions>& q_values) {
  int best = 0;
  for (int a = 1; a < kNumActions; ++a) {
    if (q_values[a] > q_values[best]) best = a;
  }
  return best;
}

int SelectAction(const QNetwork& net, const TokenSequence& obs, double epsilon, Rng& rng) {
  if (rng.Uniform() < epsilon) return rng.UniformInt(0, kNumActions - 1);
  return GreedyAction(net.Forward(obs).q_values);
}

double EpsilonAt(const TrainConfig& c, int episode) {
  const double span = c.epsilon_decay_fraction * c.episodes;
  if (span <= 0.0 || episode >= span) return c.epsilon_end;
  return c.epsilon_start + (c.epsilon_end - c.epsilon_start) * (episode / span);
}

std::vector<std::string> TrainLogHeader() {
  return {"episode", "steps",  "epsilon", "mean_td_loss", "mean_recon_loss", "mean_total_loss",
          "rf1",     "rf2",    "rf3",     "rf4",          "yield",           "n_total",
          "w_total", "leach_total"};
}

std::vector<std::string> TrainLogRow(const EpisodeLog& r) {
  return {std::to_string(r.episode), std::to_string(r.steps), FormatNumber(r.epsilon),
          FormatNumber(r.mean_td),   FormatNumber(r.mean_recon), FormatNumber(r.mean_total),
          FormatNumber(r.rf[0]),     FormatNumber(r.rf[1]),   FormatNumber(r.rf[2]),
          FormatNumber(r.rf[3]),     FormatNumber(r.yield),   FormatNumber(r.n_total),
          FormatNumber(r.w_total),   FormatNumber(r.leach_total)};
}

namespace {

struct Session {
  std::unique_ptr<QNetwork> online;
  std::unique_ptr<QNetwork> target;
  OptimizerState adam;
  Rng mask_rng;
  Rng explore_rng;
  Rng replay_rng;
  std::int64_t train_steps = 0;
  std::int64_t episodes_done = 0;
};

Checkpoint Snapshot(const RunConfig& config, const FeatureRanges& ranges, const Session& s) {
  Checkpoint c;
  c.config = config;
  c.ranges = ranges;
  c.online = s.online->params().tensors();
  c.target = s.target->params().tensors();
  c.adam = s.adam.options;
  c.adam_step = s.adam.step;
  c.adam_m = s.adam.m.tensors();
  c.adam_v = s.adam.v.tensors();
  c.rng_streams = {{"mask", s.mask_rng.Serialize()},
                   {"explore", s.explore_rng.Serialize()},
                   {"replay", s.replay_rng.Serialize()}};
  c.train_steps = s.train_steps;
  c.episodes_done = s.episodes_done;
  return c;
}

TokenSequence Observe(const CropState& state, const FeatureRanges& ranges, const TrainConfig& c,
                      Rng& mask_rng, ValueVector* values_out = nullptr) {
  const ValueVector values = NormalizeState(state, ranges);
  if (values_out != nullptr) *values_out = values;
  return ApplyMask(values, SampleMask(c.alpha_lo, c.alpha_hi, mask_rng));
}

}  // namespace

TrainResult Train(const RunConfig& config, const std::string& out_dir, std::ostream* progress) {
  ValidateRunConfig(config);
  const TrainConfig& tc = config.train;
  const FeatureRanges ranges = FeatureRangesFor(config.env);
  const RewardWeights weights = RewardPreset(tc.reward_preset);
  const auto presets = AllRewardPresets();

  std::filesystem::path dir;
  if (!out_dir.empty()) {
    dir = out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());
    WriteFile((dir / "config.ini").string(), FormatConfig(config) + "\n" + FormatRanges(ranges));
  }

  Session s;
  s.online = MakeNetwork(tc.model, DeriveSeed(tc.seed, kStreamInit));
  s.target = SyncTarget(*s.online);
  s.adam = OptimizerState::For(s.online->params(), AdamOptions{tc.learning_rate});
  s.mask_rng = Rng(DeriveSeed(tc.seed, kStreamMask));
  s.explore_rng = Rng(DeriveSeed(tc.seed, kStreamExplore));
  s.replay_rng = Rng(DeriveSeed(tc.seed, kStreamReplay));

  ReplayBuffer buffer(tc.buffer_capacity);
  ParamSet grads = s.online->params().ZerosLike();
  const LossOptions loss_options{tc.lambda, tc.gamma, tc.reward_scale};
  const std::size_t ready = static_cast<std::size_t>(std::max(tc.batch_size, tc.warmup_steps));
  std::int64_t env_steps = 0;

  std::ofstream log_file;
  auto write_row = [&log_file](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) log_file << (i ? "," : "") << cells[i];
    log_file << '\n' << std::flush;
  };
  if (!dir.empty()) {
    const std::string path = (dir / "train_log.csv").string();
    log_file.open(path, std::ios::trunc);
    if (!log_file) throw IoError("cannot write '" + path + "'");
    write_row(TrainLogHeader());
  }
  TrainResult result;

  auto fail = [&](const std::string& why) {
    if (!dir.empty()) SaveCheckpoint(Snapshot(config, ranges, s), (dir / "diagnostic.ckpt").string());
    throw TrainingError(why + " at training step " + std::to_string(s.train_steps));
  };

  for (int episode = 0; episode < tc.episodes; ++episode) {
    Env env(config.env, EpisodeSeed(config.env, tc.seed, episode));
    CropState state = env.Reset();
    const double epsilon = EpsilonAt(tc, episode);
    EpisodeLog row;
    row.episode = episode;
    row.epsilon = epsilon;

    ValueVector values;
    TokenSequence obs = Observe(state, ranges, tc, s.mask_rng, &values);
    bool done = false;
    while (!done) {
      const int action = SelectAction(*s.online, obs, epsilon, s.explore_rng);
      const StepResult step = env.Step(action);
      done = step.done;
      ++row.steps;
      ++env_steps;
      for (int k = 0; k < kNumRewardPresets; ++k) {
        row.rf[k] += ComputeReward(step.reward, presets[k], done);
      }
      row.n_total += step.reward.n_applied;
      row.w_total += step.reward.water_applied;
      row.leach_total += step.reward.nitrate_leached;
      if (done) row.yield = step.reward.yield_at_harvest;

      ValueVector next_values;
      const TokenSequence next_obs = Observe(step.state, ranges, tc, s.mask_rng, &next_values);
      Transition t;
      t.obs = obs;
      t.full_targets = ObservationTargets(values);
      t.action = action;
      t.reward = ComputeReward(step.reward, weights, done);
      t.next_obs = next_obs;
      t.done = done;
      buffer.Push(t);

      if (buffer.size() >= ready && env_steps % tc.train_every == 0) {
        const std::vector<Transition> batch =
            buffer.Sample(static_cast<std::size_t>(tc.batch_size), s.replay_rng);
        grads.SetZero();
        const LossResult loss = BiTaskLoss(*s.online, *s.target, batch, loss_options, &grads);
        if (!std::isfinite(loss.total)) fail("non-finite loss");
        try {
          AdamStep(s.online->params(), grads, s.adam);
        } catch (const TrainingError& e) {
          fail(e.what());
        }
        ++s.train_steps;
        ++row.updates;
        row.mean_td += loss.td;
        row.mean_recon += loss.recon;
        row.mean_total += loss.total;
      }
      if (env_steps % tc.target_sync_interval == 0) s.target = SyncTarget(*s.online);

      obs = next_obs;
      values = next_values;
    }
    if (row.updates > 0) {
      row.mean_td /= row.updates;
      row.mean_recon /= row.updates;
      row.mean_total /= row.updates;
    }
    ++s.episodes_done;

    if (log_file.is_open()) write_row(TrainLogRow(row));
    result.log.push_back(row);
    if (progress != nullptr && tc.verbose) {
      char line[256];
      std::snprintf(line, sizeof(line),
                    "episode %d/%d steps=%d eps=%.3f td=%.6g recon=%.6g rf1=%.2f yield=%.1f\n",
                    episode + 1, tc.episodes, row.steps, epsilon, row.mean_td, row.mean_recon,
                    row.rf[0], row.yield);
      *progress << line << std::flush;
    }
  }

  result.checkpoint = Snapshot(config, ranges, s);
  if (!dir.empty()) {
    log_file.close();
    if (!log_file) throw IoError("write failed for train_log.csv");
    SaveCheckpoint(result.checkpoint, (dir / "final.ckpt").string());
  }
  return result;
}

}  // namespace maskq
