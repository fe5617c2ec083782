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
// Command-line front end: train, eval, sweep, noise, ablate, baseline, report.
// Exit status: 0 success, 1 usage error, 2 runtime error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maskq/checkpoint.h"
#include "maskq/config.h"
#include "maskq/csv.h"
#include "maskq/errors.h"
#include "maskq/eval.h"
#include "maskq/svg.h"
#include "maskq/train.h"

namespace fs = std::filesystem;

namespace maskq {
namespace {

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

std::string DirOf(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  return parent.empty() ? "." : parent.string();
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

// One feature per line, by name or index; '#' starts a comment.
Mask ReadMaskFile(const std::string& path) {
  std::istringstream in(ReadFile(path));
  std::vector<int> hidden;
  for (std::string line; std::getline(in, line);) {
    line = line.substr(0, line.find('#'));
    std::stringstream words(line);
    for (std::string w; words >> w;) {
      int feature = -1;
      for (int f = 0; f < kNumFeatures; ++f) {
        if (w == FeatureName(f) || w == std::to_string(f)) feature = f;
      }
      if (feature < 0) throw ConfigError("mask file names unknown feature '" + w + "'");
      hidden.push_back(feature);
    }
  }
  return Mask::Hiding(hidden);
}

void PrintReport(const std::string& label, const EvalReport& report) {
  const Stat y = Summarize(report.Column([](const EpisodeReport& r) { return r.yield; }));
  const Stat n = Summarize(report.Column([](const EpisodeReport& r) { return r.n_total; }));
  const Stat w = Summarize(report.Column([](const EpisodeReport& r) { return r.w_total; }));
  const Stat l = Summarize(report.Column([](const EpisodeReport& r) { return r.leach_total; }));
  std::printf("%s: %d episodes\n", label.c_str(), y.n);
  std::printf("  yield %.2f +- %.2f kg/ha  N %.2f kg/ha  W %.2f L/m2  leach %.3f kg/ha\n", y.mean,
              y.stddev, n.mean, w.mean, l.mean);
  for (int k = 1; k <= kNumRewardPresets; ++k) {
    const Stat s = report.RfStat(k);
    std::printf("  RF%d %.2f +- %.2f\n", k, s.mean, s.stddev);
  }
}

std::string SummaryTable(const std::vector<std::pair<std::string, EvalReport>>& reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %10s %10s %10s %10s %10s %10s %10s\n", "Method",
                "N Input", "Irrigation", "Yield", "RF1", "RF2", "RF3", "RF4");
  out << line;
  for (const auto& [name, report] : reports) {
    auto mean = [&report](double EpisodeReport::*field) {
      double s = 0;
      for (const auto& r : report.runs) s += r.*field;
      return report.runs.empty() ? 0.0 : s / report.runs.size();
    };
    std::snprintf(line, sizeof(line),
                  "%-28s %10.1f %10.1f %10.1f %10.2f %10.2f %10.2f %10.2f\n", name.c_str(),
                  mean(&EpisodeReport::n_total), mean(&EpisodeReport::w_total),
                  mean(&EpisodeReport::yield), report.RfStat(1).mean, report.RfStat(2).mean,
                  report.RfStat(3).mean, report.RfStat(4).mean);
    out << line;
  }
  return out.str();
}

EvalReport ReportFromTable(const CsvTable& t) {
  EvalReport report;
  const auto yield = t.NumericColumn("yield"), n = t.NumericColumn("n_total"),
             w = t.NumericColumn("w_total"), l = t.NumericColumn("leach_total");
  std::array<std::vector<double>, kNumRewardPresets> rf;
  for (int k = 0; k < kNumRewardPresets; ++k) rf[k] = t.NumericColumn("rf" + std::to_string(k + 1));
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EpisodeReport r;
    r.run_id = static_cast<int>(i);
    r.yield = yield[i];
    r.n_total = n[i];
    r.w_total = w[i];
    r.leach_total = l[i];
    for (int k = 0; k < kNumRewardPresets; ++k) r.rf[k] = rf[k][i];
    report.runs.push_back(r);
  }
  return report;
}

struct Session {
  Checkpoint ckpt;
  EnvConfig env;
  std::unique_ptr<QNetwork> net;
};

Session OpenCheckpoint(const std::string& path, const std::string& env_config) {
  Session s;
  s.ckpt = LoadCheckpoint(path);
  s.env = env_config.empty() ? s.ckpt.config.env : ParseConfig(env_config).env;
  CheckRangesCompatible(s.ckpt, s.env);
  s.net = RestoreNetwork(s.ckpt);
  return s;
}

int Main(int argc, char** argv) {
  CLI::App app{"Masked-observation DQN crop management toolkit"};
  app.require_subcommand(1);

  // train
  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool quiet = false;
  auto* train = app.add_subcommand("train", "Train a policy");
  train->add_option("--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
  auto* seed_opt = train->add_option("--seed", seed, "Run seed (overrides train.seed)");
  train->add_option("--out", out_dir, "Output directory (default run.output_dir)");
  train->add_option("--set", overrides, "Config override, section.key=value");
  train->add_flag("--quiet", quiet, "Suppress per-episode progress lines");

  // eval
  std::string ckpt_path, mask_file, noise_name = "none", env_config, out_path;
  int episodes = 0;
  double alpha = 0.0;
  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--ckpt", ckpt_path, "Checkpoint file")->required()->check(CLI::ExistingFile);
  eval->add_option("--episodes", episodes, "Episodes (default eval.episodes)");
  auto* alpha_opt = eval->add_option("--alpha", alpha, "Masking ratio, fresh mask per step");
  auto* mask_opt = eval->add_option("--mask-file", mask_file, "Fixed mask: features to hide")
                       ->check(CLI::ExistingFile);
  alpha_opt->excludes(mask_opt);
  eval->add_option("--noise", noise_name, "Noise spec name or var=value list");
  auto* eval_seed = eval->add_option("--seed", seed, "Evaluation seed (default eval.seed)");
  eval->add_option("--env-config", env_config, "Evaluate in this config's environment");
  eval->add_option("--out", out_path, "Output CSV (default <ckpt dir>/eval.csv)");
  std::string trace_path;
  eval->add_option("--trace", trace_path, "Write the first episode's daily trajectory CSV");

  // sweep
  std::string alphas_text = "0:1:0.1";
  int trials = 0;
  auto* sweep = app.add_subcommand("sweep", "Partial-observation sweep over masking ratios");
  sweep->add_option("--ckpt", ckpt_path, "Checkpoint file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--alphas", alphas_text, "lo:hi:step (inclusive) or comma list");
  sweep->add_option("--trials", trials, "Trials per ratio (default eval.trials)");
  auto* sweep_seed = sweep->add_option("--seed", seed, "Evaluation seed (default eval.seed)");
  sweep->add_option("--env-config", env_config, "Evaluate in this config's environment");
  sweep->add_option("--out", out_path, "Output CSV (default <ckpt dir>/sweep.csv)");

  // noise
  std::vector<std::string> specs;
  int runs = 0;
  auto* noise = app.add_subcommand("noise", "Decrease rate of RF1 under observation noise");
  noise->add_option("--ckpt", ckpt_path, "Checkpoint file")->required()->check(CLI::ExistingFile);
  noise->add_option("--spec", specs, "Noise spec (repeatable); 'all' runs every built-in")
      ->required();
  noise->add_option("--n", runs, "Evaluations per spec (default eval.noise_runs)");
  auto* noise_seed = noise->add_option("--seed", seed, "Evaluation seed (default eval.seed)");
  noise->add_option("--env-config", env_config, "Evaluate in this config's environment");
  noise->add_option("--out", out_path, "Output CSV (default <ckpt dir>/noise.csv)");

  // ablate
  std::string param;
  std::vector<std::string> values;
  auto* ablate = app.add_subcommand("ablate", "Train and evaluate across a parameter grid");
  ablate->add_option("--param", param, "lambda or mask-range")
      ->required()
      ->check(CLI::IsMember({"lambda", "mask-range"}));
  ablate->add_option("--values", values, "Grid values, e.g. 0,0.01 or 0-10,0-12")
      ->required()
      ->delimiter(',');
  ablate->add_option("--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
  auto* ablate_seed = ablate->add_option("--seed", seed, "Run seed (overrides train.seed)");
  ablate->add_option("--out", out_dir, "Output directory (default run.output_dir)");
  ablate->add_option("--set", overrides, "Config override, section.key=value");
  ablate->add_flag("--quiet", quiet, "Suppress per-episode progress lines");

  // baseline
  std::string schedule_path;
  bool random_policy = false;
  auto* baseline = app.add_subcommand("baseline", "Evaluate a fixed schedule or random policy");
  auto* schedule_opt = baseline->add_option("--schedule", schedule_path, "Schedule CSV")
                           ->check(CLI::ExistingFile);
  auto* random_opt = baseline->add_flag("--random", random_policy, "Uniform-random actions");
  schedule_opt->excludes(random_opt);
  baseline->add_option("--config", config_path, "INI run configuration")
      ->check(CLI::ExistingFile);
  baseline->add_option("--episodes", episodes, "Episodes (default eval.episodes)");
  auto* baseline_seed = baseline->add_option("--seed", seed, "Evaluation seed (default eval.seed)");
  baseline->add_option("--out", out_path, "Output CSV");

  // report
  std::string in_dir;
  bool svg = false;
  auto* report = app.add_subcommand("report", "Summaries and charts for a run directory");
  report->add_option("--in", in_dir, "Run directory")->required()->check(CLI::ExistingDirectory);
  report->add_flag("--svg", svg, "Write SVG charts next to the CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsageError;
  }
  if (baseline->parsed() && schedule_path.empty() && !random_policy) {
    std::cerr << "baseline needs --schedule or --random\n" << baseline->help();
    return kUsageError;
  }

  try {
    if (train->parsed()) {
      RunConfig config = ParseConfig(config_path, overrides);
      if (*seed_opt) config.train.seed = seed;
      if (quiet) config.train.verbose = false;
      if (!out_dir.empty()) config.output_dir = out_dir;
      ValidateRunConfig(config);
      std::cout << "# effective config\n" << FormatConfig(config) << std::endl;
      const TrainResult result = Train(config, config.output_dir, &std::cout);
      std::cout << "wrote " << (fs::path(config.output_dir) / "final.ckpt").string() << " after "
                << result.checkpoint.train_steps << " gradient steps\n";
      return 0;
    }

    if (eval->parsed()) {
      Session s = OpenCheckpoint(ckpt_path, env_config);
      const EvalOptions& eo = s.ckpt.config.eval;
      const int n = episodes > 0 ? episodes : eo.episodes;
      const std::uint64_t sd = *eval_seed ? seed : eo.seed;
      const MaskChannel channel = mask_file.empty()
                                      ? MaskChannel::Ratio(*alpha_opt ? alpha : eo.alpha)
                                      : MaskChannel::Fixed(ReadMaskFile(mask_file));
      const NoiseSpec spec = ParseNoiseSpec(noise_name);
      const EvalReport r = EvaluatePolicy(*s.net, s.ckpt.ranges, s.env, n, channel, spec, sd);
      const std::string path = out_path.empty() ? DirOf(ckpt_path) + "/eval.csv" : out_path;
      WriteCsv(EvalTable(r), path);
      if (!trace_path.empty()) {
        EpisodeTrace trace;
        Rng mask_rng(DeriveSeed(sd, kStreamMask, 0));
        Rng noise_rng(DeriveSeed(sd, kStreamNoise, 0));
        const QNetwork& net = *s.net;
        RunEpisode(
            s.env, s.ckpt.ranges, EpisodeSeed(s.env, sd, 0),
            [&net](const TokenSequence& obs, int) { return GreedyAction(net.Forward(obs).q_values); },
            channel, spec, mask_rng, noise_rng, &trace);
        WriteCsv(TrajectoryTable(trace), trace_path);
        std::cout << "wrote " << trace_path << "\n";
      }
      PrintReport("policy (alpha=" + FormatNumber(channel.alpha) + ", noise=" +
                      DescribeNoise(spec) + ")",
                  r);
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      Session s = OpenCheckpoint(ckpt_path, env_config);
      const EvalOptions& eo = s.ckpt.config.eval;
      const std::vector<double> alphas = ParseAlphaList(alphas_text);
      const std::vector<SweepRow> rows =
          PartialObsSweep(*s.net, s.ckpt.ranges, s.env, alphas, trials > 0 ? trials : eo.trials,
                          *sweep_seed ? seed : eo.seed);
      const std::string path = out_path.empty() ? DirOf(ckpt_path) + "/sweep.csv" : out_path;
      const CsvTable table = SweepTable(rows);
      WriteCsv(table, path);
      std::cout << FormatCsv(table);
      std::vector<double> a, m;
      for (const auto& r : rows) a.push_back(r.alpha), m.push_back(r.rf1.mean);
      if (rows.size() >= 2) std::printf("spearman(alpha, mean_rf1) = %.4f\n", Spearman(a, m));
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (noise->parsed()) {
      Session s = OpenCheckpoint(ckpt_path, env_config);
      const EvalOptions& eo = s.ckpt.config.eval;
      std::vector<std::string> names;
      for (const auto& sp : specs) {
        if (sp == "all") {
          for (const auto& b : NoiseSpecNames()) {
            if (b != "none") names.push_back(b);
          }
        } else {
          names.push_back(sp);
        }
      }
      std::vector<NoiseResult> results;
      for (const auto& name : names) {
        results.push_back(NoiseEval(*s.net, s.ckpt.ranges, s.env, ParseNoiseSpec(name),
                                    runs > 0 ? runs : eo.noise_runs,
                                    *noise_seed ? seed : eo.seed));
        const NoiseResult& r = results.back();
        std::printf("%-10s clean %.2f noisy %.2f decrease %.3f%%\n", name.c_str(), r.mean_clean,
                    r.mean_noisy, r.decrease_rate_pct);
      }
      const std::string path = out_path.empty() ? DirOf(ckpt_path) + "/noise.csv" : out_path;
      WriteCsv(NoiseTable(results), path);
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (ablate->parsed()) {
      RunConfig base = ParseConfig(config_path, overrides);
      if (*ablate_seed) base.train.seed = seed;
      if (quiet) base.train.verbose = false;
      if (!out_dir.empty()) base.output_dir = out_dir;
      CsvTable table;
      table.header = {"param", "value", "mean_rf1", "std_rf1", "episodes"};
      for (const std::string& v : values) {
        RunConfig c = base;
        if (param == "lambda") {
          ApplyOverride(c, "train.lambda=" + v);
        } else {
          const auto dash = v.find('-');
          if (dash == std::string::npos) throw ConfigError("mask range must look like 0-12");
          const int lo = std::stoi(v.substr(0, dash)), hi = std::stoi(v.substr(dash + 1));
          if (lo < 0 || hi < lo || hi > kNumFeatures) {
            throw ConfigError("mask range '" + v + "' outside 0.." + std::to_string(kNumFeatures));
          }
          c.train.alpha_lo = static_cast<double>(lo) / kNumFeatures;
          c.train.alpha_hi = static_cast<double>(hi) / kNumFeatures;
        }
        c.output_dir = (fs::path(base.output_dir) / (param + "_" + v)).string();
        ValidateRunConfig(c);
        std::cout << "# " << param << " = " << v << " -> " << c.output_dir << std::endl;
        const TrainResult tr = Train(c, c.output_dir, &std::cout);
        auto net = RestoreNetwork(tr.checkpoint);
        const EvalReport r = EvaluatePolicy(*net, tr.checkpoint.ranges, c.env, c.eval.episodes,
                                            MaskChannel::Ratio(c.eval.alpha), NoiseSpec{},
                                            c.eval.seed);
        const Stat s = r.RfStat(1);
        table.rows.push_back({param, v, FormatNumber(s.mean), FormatNumber(s.stddev),
                              std::to_string(s.n)});
        std::printf("%s=%s mean RF1 %.2f +- %.2f\n", param.c_str(), v.c_str(), s.mean, s.stddev);
      }
      EnsureDir(base.output_dir);
      const std::string path = (fs::path(base.output_dir) / "ablate.csv").string();
      WriteCsv(table, path);
      std::cout << "wrote " << path << "\n";
      return 0;
    }

    if (baseline->parsed()) {
      const RunConfig c = ParseConfig(config_path);
      const int n = episodes > 0 ? episodes : c.eval.episodes;
      const std::uint64_t sd = *baseline_seed ? seed : c.eval.seed;
      EvalReport r;
      std::string label;
      if (random_policy) {
        r = EvaluateRandomPolicy(c.env, n, sd);
        label = "random policy";
      } else {
        const FixedSchedule schedule = LoadSchedule(schedule_path);
        r = RunFixedSchedule(schedule, c.env, sd, n);
        label = "schedule " + schedule.name;
      }
      PrintReport(label, r);
      if (!out_path.empty()) {
        WriteCsv(EvalTable(r), out_path);
        std::cout << "wrote " << out_path << "\n";
      }
      return 0;
    }

    if (report->parsed()) {
      const fs::path dir(in_dir);
      std::ostringstream summary;
      bool any = false;
      if (fs::exists(dir / "train_log.csv")) {
        any = true;
        const CsvTable log = ReadCsv((dir / "train_log.csv").string());
        const auto ep = log.NumericColumn("episode");
        const auto rf1 = log.NumericColumn("rf1");
        const std::size_t tail = std::min<std::size_t>(100, rf1.size());
        const Stat last = Summarize(std::vector<double>(rf1.end() - tail, rf1.end()));
        summary << "training: " << rf1.size() << " episodes, final-" << tail
                << " mean RF1 " << FormatNumber(last.mean) << "\n";
        if (svg) {
          std::vector<double> smooth(rf1.size());
          double acc = 0;
          for (std::size_t i = 0; i < rf1.size(); ++i) {
            acc += rf1[i];
            if (i >= 50) acc -= rf1[i - 50];
            smooth[i] = acc / std::min<std::size_t>(i + 1, 50);
          }
          WriteFile((dir / "train_log.svg").string(),
                    LineChart("Training return", "episode", "RF1",
                              {{"RF1", ep, rf1}, {"RF1 (50-episode mean)", ep, smooth}}));
        }
      }
      if (fs::exists(dir / "sweep.csv")) {
        any = true;
        const CsvTable t = ReadCsv((dir / "sweep.csv").string());
        const auto a = t.NumericColumn("alpha"), m = t.NumericColumn("mean_rf1");
        summary << "sweep:\n" << FormatCsv(t);
        if (a.size() >= 2) summary << "spearman(alpha, mean_rf1) = " << Spearman(a, m) << "\n";
        if (svg) {
          WriteFile((dir / "sweep.svg").string(),
                    LineChart("Partial observation", "masking ratio alpha", "mean RF1",
                              {{"mean RF1", a, m}}));
        }
      }
      if (fs::exists(dir / "noise.csv")) {
        any = true;
        const CsvTable t = ReadCsv((dir / "noise.csv").string());
        summary << "noise:\n" << FormatCsv(t);
        if (svg) {
          std::vector<std::string> labels;
          for (const auto& row : t.rows) labels.push_back(row[t.Column("magnitudes")]);
          WriteFile((dir / "noise.svg").string(),
                    BarChart("Decrease rate under noise", "decrease rate (%)", labels,
                             t.NumericColumn("decrease_rate_pct")));
        }
      }
      if (fs::exists(dir / "ablate.csv")) {
        any = true;
        summary << "ablation:\n" << FormatCsv(ReadCsv((dir / "ablate.csv").string()));
      }
      std::vector<std::pair<std::string, EvalReport>> evals;
      for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("eval", 0) == 0 && entry.path().extension() == ".csv") {
          evals.emplace_back(entry.path().stem().string(),
                             ReportFromTable(ReadCsv(entry.path().string())));
        }
      }
      std::sort(evals.begin(), evals.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      if (!evals.empty()) {
        any = true;
        summary << SummaryTable(evals);
      }
      if (!any) throw IoError("no run outputs found in '" + in_dir + "'");
      WriteFile((dir / "summary.txt").string(), summary.str());
      std::cout << summary.str();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kUsageError;
}

}  // namespace
}  // namespace maskq

int main(int argc, char** argv) { return maskq::Main(argc, argv); }
