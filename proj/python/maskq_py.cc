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
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maskq/checkpoint.h"
#include "maskq/config.h"
#include "maskq/encode.h"
#include "maskq/env.h"
#include "maskq/errors.h"
#include "maskq/eval.h"
#include "maskq/gradcheck.h"
#include "maskq/loss.h"
#include "maskq/qnet.h"
#include "maskq/train.h"

namespace py = pybind11;

namespace maskq {
namespace {

ValueVector ToValues(const std::vector<int>& v) {
  if (v.size() != kNumFeatures) throw DomainError("expected 25 values");
  ValueVector out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

TokenSequence ToTokens(const std::vector<int>& ids) {
  if (ids.size() != kSeqLen) throw DomainError("expected 27 token ids");
  TokenSequence seq;
  std::copy(ids.begin(), ids.end(), seq.ids.begin());
  ValidateTokens(seq);
  return seq;
}

CropState ToState(const std::vector<double>& v) {
  if (v.size() != kNumFeatures) throw DomainError("expected 25 state values");
  CropState out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

py::dict StepDict(const StepResult& r) {
  py::dict d;
  d["state"] = std::vector<double>(r.state.begin(), r.state.end());
  d["yield"] = r.reward.yield_at_harvest;
  d["n_applied"] = r.reward.n_applied;
  d["water_applied"] = r.reward.water_applied;
  d["nitrate_leached"] = r.reward.nitrate_leached;
  d["done"] = r.done;
  return d;
}

py::dict StatDict(const Stat& s) {
  py::dict d;
  d["mean"] = s.mean;
  d["std"] = s.stddev;
  d["n"] = s.n;
  return d;
}

py::dict ReportDict(const EvalReport& report) {
  py::list runs;
  for (const auto& r : report.runs) {
    py::dict d;
    d["run_id"] = r.run_id;
    d["seed"] = r.seed;
    d["steps"] = r.steps;
    d["yield"] = r.yield;
    d["n_total"] = r.n_total;
    d["w_total"] = r.w_total;
    d["leach_total"] = r.leach_total;
    d["rf"] = std::vector<double>(r.rf.begin(), r.rf.end());
    runs.append(d);
  }
  py::dict out;
  out["runs"] = runs;
  for (int k = 1; k <= kNumRewardPresets; ++k) {
    out[py::str("rf" + std::to_string(k))] = StatDict(report.RfStat(k));
  }
  return out;
}

}  // namespace
}  // namespace maskq

PYBIND11_MODULE(maskq, m) {
  using namespace maskq;
  m.doc() = "Masked-observation DQN for crop nitrogen and irrigation management";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", error);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<StateError>(m, "StateError", error);
  py::register_exception<EncodingError>(m, "EncodingError", error);
  py::register_exception<TrainingError>(m, "TrainingError", error);
  py::register_exception<FormatError>(m, "FormatError", error);
  py::register_exception<CompatibilityError>(m, "CompatibilityError", error);
  py::register_exception<ParseError>(m, "ParseError", error);
  py::register_exception<IoError>(m, "IoError", error);

  m.attr("NUM_FEATURES") = kNumFeatures;
  m.attr("NUM_ACTIONS") = kNumActions;
  m.attr("MASK_TOKEN") = kMaskToken;
  m.attr("CLS_TOKEN") = kClsToken;
  m.attr("SEP_TOKEN") = kSepToken;
  m.attr("SEQ_LEN") = kSeqLen;

  m.def("feature_name", [](int f) { return std::string(FeatureName(f)); });
  m.def("decode_action", [](int a) {
    const ActionDose d = DecodeAction(a);
    return py::make_tuple(d.n_dose, d.water_dose);
  });
  m.def("encode_action", [](double n, double w) { return EncodeAction(ActionDose{n, w}); });

  py::class_<RewardWeights>(m, "RewardWeights")
      .def_readonly("w1", &RewardWeights::w1)
      .def_readonly("w2", &RewardWeights::w2)
      .def_readonly("w3", &RewardWeights::w3)
      .def_readonly("w4", &RewardWeights::w4);
  m.def("reward_preset", &RewardPreset, py::arg("rf"));
  m.def(
      "compute_reward",
      [](double yield, double n, double w, double leach, int rf, bool harvest) {
        return ComputeReward(RewardComponents{yield, n, w, leach}, RewardPreset(rf), harvest);
      },
      py::arg("yield_at_harvest"), py::arg("n_applied"), py::arg("water_applied"),
      py::arg("nitrate_leached"), py::arg("rf"), py::arg("is_harvest"));

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init(&DefaultRunConfig))
      .def_static(
          "parse", [](const std::string& text) { return ParseConfigText(text); }, py::arg("text"))
      .def_static("load", &ParseConfig, py::arg("path"),
                  py::arg("overrides") = std::vector<std::string>{})
      .def("override", &ApplyOverride, py::arg("assignment"))
      .def("validate", &ValidateRunConfig)
      .def("format", &FormatConfig)
      .def_property(
          "output_dir", [](const RunConfig& c) { return c.output_dir; },
          [](RunConfig& c, const std::string& d) { c.output_dir = d; })
      .def_property_readonly("gamma", [](const RunConfig& c) { return c.train.gamma; })
      .def_property_readonly("lam", [](const RunConfig& c) { return c.train.lambda; })
      .def_property_readonly("learning_rate",
                             [](const RunConfig& c) { return c.train.learning_rate; })
      .def_property_readonly("batch_size", [](const RunConfig& c) { return c.train.batch_size; });
  m.def("config_keys", &ConfigKeys);

  py::class_<Env>(m, "Env")
      .def(py::init([](const RunConfig& c, std::uint64_t seed) { return Env(c.env, seed); }),
           py::arg("config"), py::arg("seed") = 0)
      .def("reset",
           [](Env& e) {
             const CropState s = e.Reset();
             return std::vector<double>(s.begin(), s.end());
           })
      .def("step", [](Env& e, int action) { return StepDict(e.Step(action)); })
      .def("step_dose",
           [](Env& e, double n, double w) { return StepDict(e.StepDose(ActionDose{n, w})); })
      .def_property_readonly("done", &Env::done);

  m.def(
      "normalize_state",
      [](const std::vector<double>& state, const RunConfig& c) {
        const ValueVector v = NormalizeState(ToState(state), FeatureRangesFor(c.env));
        return std::vector<int>(v.begin(), v.end());
      },
      py::arg("state"), py::arg("config"));
  m.def("masked_count_for", &MaskedCountFor, py::arg("alpha"));
  m.def(
      "sample_mask",
      [](double lo, double hi, std::uint64_t seed) {
        Rng rng(seed);
        const Mask mask = SampleMask(lo, hi, rng);
        return std::vector<bool>(mask.visible.begin(), mask.visible.end());
      },
      py::arg("alpha_lo"), py::arg("alpha_hi"), py::arg("seed"));
  m.def(
      "apply_mask",
      [](const std::vector<int>& values, const std::vector<bool>& visible) {
        if (visible.size() != kNumFeatures) throw DomainError("expected 25 visibility flags");
        Mask mask;
        std::copy(visible.begin(), visible.end(), mask.visible.begin());
        const TokenSequence seq = ApplyMask(ToValues(values), mask);
        return std::vector<int>(seq.ids.begin(), seq.ids.end());
      },
      py::arg("values"), py::arg("visible"));

  py::class_<QNetwork>(m, "QNetwork")
      .def(py::init([](const RunConfig& c, std::uint64_t seed) {
             return MakeNetwork(c.train.model, seed);
           }),
           py::arg("config"), py::arg("seed") = 0)
      .def("forward",
           [](const QNetwork& net, const std::vector<int>& ids) {
             const NetOutput out = net.Forward(ToTokens(ids));
             return py::make_tuple(
                 std::vector<double>(out.q_values.begin(), out.q_values.end()),
                 std::vector<double>(out.recon.begin(), out.recon.end()));
           })
      .def("greedy_action",
           [](const QNetwork& net, const std::vector<int>& ids) {
             return GreedyAction(net.Forward(ToTokens(ids)).q_values);
           })
      .def_property_readonly("parameter_count",
                             [](const QNetwork& net) { return net.params().ParameterCount(); });

  m.def(
      "train",
      [](const RunConfig& c, const std::string& out_dir) {
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = Train(c, out_dir, nullptr);
        }
        py::list log;
        for (const EpisodeLog& row : r.log) {
          py::dict d;
          d["episode"] = row.episode;
          d["steps"] = row.steps;
          d["epsilon"] = row.epsilon;
          d["mean_td_loss"] = row.mean_td;
          d["mean_recon_loss"] = row.mean_recon;
          d["mean_total_loss"] = row.mean_total;
          d["rf"] = std::vector<double>(row.rf.begin(), row.rf.end());
          d["yield"] = row.yield;
          log.append(d);
        }
        return log;
      },
      py::arg("config"), py::arg("out_dir") = "");

  py::class_<Checkpoint>(m, "Checkpoint")
      .def_static("load", &LoadCheckpoint, py::arg("path"))
      .def("save", [](const Checkpoint& c, const std::string& path) { SaveCheckpoint(c, path); })
      .def("to_bytes",
           [](const Checkpoint& c) { return py::bytes(SerializeCheckpoint(c)); })
      .def_static("from_bytes",
                  [](const py::bytes& b) { return DeserializeCheckpoint(std::string(b)); })
      .def_readonly("config", &Checkpoint::config)
      .def_readonly("train_steps", &Checkpoint::train_steps)
      .def_readonly("episodes_done", &Checkpoint::episodes_done)
      .def("network", [](const Checkpoint& c) { return RestoreNetwork(c); });

  m.def(
      "evaluate",
      [](const Checkpoint& c, int episodes, double alpha, const std::string& noise,
         std::uint64_t seed) {
        return ReportDict(EvaluateCheckpoint(c, c.config.env, episodes, MaskChannel::Ratio(alpha),
                                             ParseNoiseSpec(noise), seed));
      },
      py::arg("checkpoint"), py::arg("episodes") = 100, py::arg("alpha") = 0.0,
      py::arg("noise") = "none", py::arg("seed") = 1000);
  m.def(
      "evaluate_random",
      [](const RunConfig& c, int episodes, std::uint64_t seed) {
        return ReportDict(EvaluateRandomPolicy(c.env, episodes, seed));
      },
      py::arg("config"), py::arg("episodes") = 100, py::arg("seed") = 1000);
  m.def(
      "sweep",
      [](const Checkpoint& c, const std::string& alphas, int trials, std::uint64_t seed) {
        auto net = RestoreNetwork(c);
        py::list rows;
        for (const SweepRow& r : PartialObsSweep(*net, c.ranges, c.config.env,
                                                 ParseAlphaList(alphas), trials, seed)) {
          rows.append(py::make_tuple(r.alpha, r.rf1.mean, r.rf1.stddev, r.rf1.n));
        }
        return rows;
      },
      py::arg("checkpoint"), py::arg("alphas") = "0:1:0.1", py::arg("trials") = 100,
      py::arg("seed") = 1000);
  m.def(
      "noise_eval",
      [](const Checkpoint& c, const std::string& spec, int n, std::uint64_t seed) {
        auto net = RestoreNetwork(c);
        const NoiseResult r = NoiseEval(*net, c.ranges, c.config.env, ParseNoiseSpec(spec), n, seed);
        py::dict d;
        d["mean_clean"] = r.mean_clean;
        d["mean_noisy"] = r.mean_noisy;
        d["decrease_rate_pct"] = r.decrease_rate_pct;
        d["n"] = r.n;
        return d;
      },
      py::arg("checkpoint"), py::arg("spec"), py::arg("n") = 400, py::arg("seed") = 1000);
  m.def(
      "run_schedule",
      [](const std::string& csv_text, const RunConfig& c, std::uint64_t seed, int episodes) {
        return ReportDict(RunFixedSchedule(ParseSchedule(csv_text), c.env, seed, episodes));
      },
      py::arg("schedule_csv"), py::arg("config"), py::arg("seed") = 1000, py::arg("episodes") = 1);
  m.def("noise_spec_names", &NoiseSpecNames);
  m.def("spearman", &Spearman);
}
