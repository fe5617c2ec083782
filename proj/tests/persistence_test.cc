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
#include <filesystem>
#include <functional>
#include <string>

#include "doctest.h"
#include "maskq/checkpoint.h"
#include "maskq/config.h"
#include "maskq/csv.h"
#include "maskq/errors.h"
#include "maskq/train.h"

namespace maskq {
namespace {

namespace fs = std::filesystem;

std::string TempPath(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "maskq_persistence_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

RunConfig SmallRun(int d_model) {
  RunConfig c;
  c.env = NoiseFreeEnvConfig();
  c.env.season_max_days = 10;
  c.train.episodes = 3;
  c.train.batch_size = 4;
  c.train.learning_rate = 1e-3;
  c.train.verbose = false;
  c.train.model.d_model = d_model;
  c.train.model.layers = 1;
  c.train.model.heads = 2;
  c.train.model.ffn = 16;
  return c;
}

template <typename E>
std::string ErrorText(const std::function<void()>& f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  }
  FAIL("expected exception");
  return "";
}

TEST_SUITE("persistence") {

TEST_CASE("empty config gives defaults") {
  const RunConfig c = ParseConfigText("");
  CHECK(c.train.gamma == 0.99);
  CHECK(c.train.lambda == 0.02);
  CHECK(c.train.learning_rate == 1e-5);
  CHECK(c.train.batch_size == 512);
  CHECK(c.train.episodes == 2000);
  CHECK(c.train.target_sync_interval == 1000);
  CHECK(c.train.alpha_hi == 0.48);
}

TEST_CASE("overrides are applied and echoed") {
  RunConfig c = ParseConfigText("[train]\nlambda = 0.05\n# comment\n");
  CHECK(c.train.lambda == 0.05);
  ApplyOverride(c, "train.lambda=0.1");
  CHECK(c.train.lambda == 0.1);
  CHECK(FormatConfig(c).find("lambda = 0.1\n") != std::string::npos);
  ApplyOverride(c, "gamma=0.9");
  CHECK(c.train.gamma == 0.9);
  CHECK_THROWS_AS(ApplyOverride(c, "train.lambda"), ParseError);
  CHECK_THROWS_AS(ApplyOverride(c, "train.lambda=abc"), ParseError);
}

TEST_CASE("unknown keys are reported by name") {
  const std::string msg =
      ErrorText<ParseError>([] { ParseConfigText("[train]\ngamna = 0.9\n"); });
  CHECK(msg.find("gamna") != std::string::npos);
  RunConfig c;
  CHECK(ErrorText<ParseError>([&] { ApplyOverride(c, "gamna=1"); }).find("gamna") !=
        std::string::npos);
  CHECK_THROWS_AS(ParseConfigText("[train\nx"), ParseError);
}

TEST_CASE("file config is validated") {
  const std::string path = TempPath("bad.ini");
  WriteFile(path, "[train]\ngamma = 1.5\n");
  CHECK_THROWS_AS(ParseConfig(path), ConfigError);
  WriteFile(path, "[train]\ngamma = 0.5\n");
  CHECK(ParseConfig(path, {"lambda=0.3"}).train.lambda == 0.3);
  CHECK_THROWS_AS(ParseConfig(TempPath("missing.ini")), IoError);
}

TEST_CASE("format and parse round trip") {
  RunConfig c = DefaultRunConfig();
  c.train.lambda = 0.123456789012345;
  c.train.seed = 18446744073709551615ull;
  c.env.theta_sat = 0.47;
  c.train.model.kind = Approximator::kMlp;
  c.eval.noise_runs = 17;
  const std::string text = FormatConfig(c);
  const RunConfig back = ParseConfigText(text);
  CHECK(FormatConfig(back) == text);
  CHECK(back.train.lambda == c.train.lambda);
  CHECK(back.train.seed == c.train.seed);
  CHECK(back.train.model.kind == Approximator::kMlp);
  FeatureRanges ranges;
  const RunConfig with_ranges =
      ParseConfigText(text + "\n" + FormatRanges(FeatureRangesFor(c.env)), &ranges);
  CHECK(ranges == FeatureRangesFor(c.env));
  CHECK_THROWS_AS(ParseConfigText(text + "\n" + FormatRanges(ranges)), ParseError);
  CHECK(ConfigKeys().size() > 50);
}

TEST_CASE("checkpoint round trip is byte identical") {
  const Checkpoint ckpt = Train(SmallRun(16), "").checkpoint;
  CHECK(ckpt.train_steps > 0);
  const std::string a = TempPath("a.ckpt");
  const std::string b = TempPath("b.ckpt");
  SaveCheckpoint(ckpt, a);
  const Checkpoint loaded = LoadCheckpoint(a);
  SaveCheckpoint(loaded, b);
  CHECK(ReadFile(a) == ReadFile(b));
  CHECK(loaded.train_steps == ckpt.train_steps);
  CHECK(loaded.adam_step == ckpt.adam_step);
  CHECK(loaded.rng_streams == ckpt.rng_streams);

  auto original = RestoreNetwork(ckpt);
  auto restored = RestoreNetwork(loaded);
  ValueVector v{};
  for (int f = 0; f < kNumFeatures; ++f) v[f] = 12 * f;
  const TokenSequence seq = ApplyMask(v, Mask::Hiding({4}));
  CHECK(original->Forward(seq).q_values == restored->Forward(seq).q_values);
}

TEST_CASE("corrupt checkpoints are rejected") {
  const std::string bytes = SerializeCheckpoint(Train(SmallRun(8), "").checkpoint);
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes.substr(0, bytes.size() / 2)), FormatError);
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes.substr(0, 4)), FormatError);
  CHECK_THROWS_AS(DeserializeCheckpoint(bytes + "x"), FormatError);
  std::string magic = bytes;
  magic[0] = 'X';
  CHECK_THROWS_AS(DeserializeCheckpoint(magic), FormatError);
  std::string version = bytes;
  version[8] = 9;
  CHECK(ErrorText<FormatError>([&] { DeserializeCheckpoint(version); }).find("version") !=
        std::string::npos);
  CHECK_THROWS_AS(LoadCheckpoint(TempPath("absent.ckpt")), IoError);
}

TEST_CASE("weights from a different architecture are rejected") {
  const Checkpoint small = Train(SmallRun(32), "").checkpoint;
  auto wide = MakeNetwork(SmallRun(64).train.model, 0);
  const std::string msg = ErrorText<CompatibilityError>([&] { LoadWeights(small, *wide); });
  CHECK(msg.find("embed/token") != std::string::npos);

  // A checkpoint whose declared model disagrees with its tensors.
  Checkpoint forged = small;
  forged.config.train.model.d_model = 64;
  CHECK_THROWS_AS(DeserializeCheckpoint(SerializeCheckpoint(forged)), CompatibilityError);
}

TEST_CASE("csv round trip") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"1", "0.1"}, {"2", "-3.5"}};
  const CsvTable back = ParseCsv(FormatCsv(t));
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.NumericColumn("b") == std::vector<double>{0.1, -3.5});
  CHECK_THROWS_AS(back.Column("c"), FormatError);
  CHECK_THROWS_AS(ParseCsv("a,b\n1\n"), FormatError);
  CHECK(FormatNumber(0.1) == "0.1");
}

}  // TEST_SUITE

}  // namespace
}  // namespace maskq
