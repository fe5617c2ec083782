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

#include "maskq/config.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "maskq/errors.h"

namespace maskq {
namespace {

std::string FormatDouble(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

double ParseDouble(const std::string& key, const std::string& text) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("bad numeric value for '" + key + "': '" + text + "'");
  }
  return x;
}

template <typename Int>
Int ParseInt(const std::string& key, const std::string& text) {
  Int x = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("bad integer value for '" + key + "': '" + text + "'");
  }
  return x;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ParseError("bad boolean value for '" + key + "': '" + text + "'");
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

#define MASKQ_DOUBLE(sec, name, member)                                                     \
  Field{sec, name, [](const RunConfig& c) { return FormatDouble(c.member); },             \
        [](RunConfig& c, const std::string& v) { c.member = ParseDouble(sec "." name, v); }}
#define MASKQ_INT(sec, name, member, type)                                                \
  Field{sec, name, [](const RunConfig& c) { return std::to_string(c.member); },          \
        [](RunConfig& c, const std::string& v) { c.member = ParseInt<type>(sec "." name, v); }}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      MASKQ_INT("env", "season_max_days", env.season_max_days, int),
      MASKQ_INT("env", "planting_doy", env.planting_doy, int),
      MASKQ_DOUBLE("env", "soil_depth_mm", env.soil_depth_mm),
      MASKQ_DOUBLE("env", "theta_sat", env.theta_sat),
      MASKQ_DOUBLE("env", "field_capacity", env.field_capacity),
      MASKQ_DOUBLE("env", "critical_sw", env.critical_sw),
      MASKQ_DOUBLE("env", "wilting_point", env.wilting_point),
      MASKQ_DOUBLE("env", "k_drain", env.k_drain),
      MASKQ_DOUBLE("env", "rain_cap_mm", env.rain_cap_mm),
      MASKQ_DOUBLE("env", "initial_nitrate", env.initial_nitrate),
      MASKQ_DOUBLE("env", "mineralization_rate", env.mineralization_rate),
      MASKQ_DOUBLE("env", "k_leach", env.k_leach),
      MASKQ_DOUBLE("env", "d_half_mm", env.d_half_mm),
      MASKQ_DOUBLE("env", "n_crit_conc", env.n_crit_conc),
      MASKQ_DOUBLE("env", "max_n_uptake", env.max_n_uptake),
      MASKQ_DOUBLE("env", "base_temp", env.base_temp),
      MASKQ_DOUBLE("env", "tt_flowering", env.tt_flowering),
      MASKQ_DOUBLE("env", "tt_maturity", env.tt_maturity),
      MASKQ_DOUBLE("env", "radiation_use_efficiency", env.radiation_use_efficiency),
      MASKQ_DOUBLE("env", "canopy_k", env.canopy_k),
      MASKQ_DOUBLE("env", "lai_initial", env.lai_initial),
      MASKQ_DOUBLE("env", "lai_max", env.lai_max),
      MASKQ_DOUBLE("env", "lai_growth_rate", env.lai_growth_rate),
      MASKQ_DOUBLE("env", "lai_senescence_rate", env.lai_senescence_rate),
      MASKQ_DOUBLE("env", "grain_partition", env.grain_partition),
      MASKQ_DOUBLE("env", "root_initial_cm", env.root_initial_cm),
      MASKQ_DOUBLE("env", "root_growth_cm", env.root_growth_cm),
      MASKQ_DOUBLE("env", "root_max_cm", env.root_max_cm),
      MASKQ_DOUBLE("env", "et0_rad_coef", env.et0_rad_coef),
      MASKQ_DOUBLE("env", "et0_temp_offset", env.et0_temp_offset),
      MASKQ_DOUBLE("env", "temp_mean", env.temp_mean),
      MASKQ_DOUBLE("env", "temp_amplitude", env.temp_amplitude),
      MASKQ_DOUBLE("env", "temp_phase_doy", env.temp_phase_doy),
      MASKQ_DOUBLE("env", "temp_sigma", env.temp_sigma),
      MASKQ_DOUBLE("env", "diurnal_range", env.diurnal_range),
      MASKQ_DOUBLE("env", "diurnal_sigma", env.diurnal_sigma),
      MASKQ_DOUBLE("env", "srad_mean", env.srad_mean),
      MASKQ_DOUBLE("env", "srad_amplitude", env.srad_amplitude),
      MASKQ_DOUBLE("env", "srad_sigma", env.srad_sigma),
      MASKQ_DOUBLE("env", "p_wet", env.p_wet),
      MASKQ_DOUBLE("env", "rain_shape", env.rain_shape),
      MASKQ_DOUBLE("env", "rain_scale_mm", env.rain_scale_mm),
      MASKQ_INT("env", "rng_seed", env.rng_seed, std::uint64_t),

      MASKQ_INT("train", "episodes", train.episodes, int),
      MASKQ_DOUBLE("train", "gamma", train.gamma),
      MASKQ_DOUBLE("train", "lambda", train.lambda),
      MASKQ_INT("train", "batch_size", train.batch_size, int),
      MASKQ_DOUBLE("train", "learning_rate", train.learning_rate),
      MASKQ_INT("train", "target_sync_interval", train.target_sync_interval, int),
      MASKQ_DOUBLE("train", "epsilon_start", train.epsilon_start),
      MASKQ_DOUBLE("train", "epsilon_end", train.epsilon_end),
      MASKQ_DOUBLE("train", "epsilon_decay_fraction", train.epsilon_decay_fraction),
      MASKQ_DOUBLE("train", "alpha_lo", train.alpha_lo),
      MASKQ_DOUBLE("train", "alpha_hi", train.alpha_hi),
      MASKQ_INT("train", "reward_preset", train.reward_preset, int),
      MASKQ_INT("train", "seed", train.seed, std::uint64_t),
      MASKQ_INT("train", "buffer_capacity", train.buffer_capacity, std::size_t),
      MASKQ_INT("train", "train_every", train.train_every, int),
      MASKQ_INT("train", "warmup_steps", train.warmup_steps, int),
      MASKQ_DOUBLE("train", "reward_scale", train.reward_scale),
      Field{"train", "verbose",
            [](const RunConfig& c) { return std::string(c.train.verbose ? "true" : "false"); },
            [](RunConfig& c, const std::string& v) {
              c.train.verbose = ParseBool("train.verbose", v);
            }},

      Field{"model", "approximator",
            [](const RunConfig& c) { return ApproximatorName(c.train.model.kind); },
            [](RunConfig& c, const std::string& v) {
              try {
                c.train.model.kind = ParseApproximator(v);
              } catch (const ConfigError& e) {
                throw ParseError(std::string("model.approximator: ") + e.what());
              }
            }},
      MASKQ_INT("model", "d_model", train.model.d_model, int),
      MASKQ_INT("model", "layers", train.model.layers, int),
      MASKQ_INT("model", "heads", train.model.heads, int),
      MASKQ_INT("model", "ffn", train.model.ffn, int),
      MASKQ_INT("model", "mlp_hidden1", train.model.mlp_hidden1, int),
      MASKQ_INT("model", "mlp_hidden2", train.model.mlp_hidden2, int),

      MASKQ_INT("eval", "episodes", eval.episodes, int),
      MASKQ_DOUBLE("eval", "alpha", eval.alpha),
      MASKQ_INT("eval", "seed", eval.seed, std::uint64_t),
      MASKQ_INT("eval", "trials", eval.trials, int),
      MASKQ_INT("eval", "noise_runs", eval.noise_runs, int),

      Field{"run", "output_dir", [](const RunConfig& c) { return c.output_dir; },
            [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
  };
  return fields;
}

#undef MASKQ_DOUBLE
#undef MASKQ_INT

const Field* FindField(const std::string& section, const std::string& key) {
  for (const Field& f : Fields()) {
    if (f.section == section && f.key == key) return &f;
  }
  return nullptr;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void ParseRangesSection(const boost::property_tree::ptree& node, FeatureRanges& ranges) {
  for (const auto& [key, child] : node) {
    int feature = -1;
    for (int f = 0; f < kNumFeatures; ++f) {
      if (key == FeatureName(f)) feature = f;
    }
    if (feature < 0) throw ParseError("unknown key 'ranges." + key + "'");
    const std::string value = child.get_value<std::string>();
    const auto comma = value.find(',');
    if (comma == std::string::npos) {
      throw ParseError("ranges." + key + " must be 'min,max'");
    }
    ranges.lo[feature] = ParseDouble("ranges." + key, Trim(value.substr(0, comma)));
    ranges.hi[feature] = ParseDouble("ranges." + key, Trim(value.substr(comma + 1)));
  }
}

}  // namespace

void ValidateTrainConfig(const TrainConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError("invalid train config: " + what);
  };
  require(c.episodes >= 0, "episodes >= 0");
  require(c.gamma >= 0 && c.gamma <= 1, "0 <= gamma <= 1");
  require(c.lambda >= 0, "lambda >= 0");
  require(c.batch_size >= 1, "batch_size >= 1");
  require(c.learning_rate > 0, "learning_rate > 0");
  require(c.target_sync_interval >= 1, "target_sync_interval >= 1");
  require(c.epsilon_end >= 0 && c.epsilon_end <= c.epsilon_start && c.epsilon_start <= 1,
          "0 <= epsilon_end <= epsilon_start <= 1");
  require(c.epsilon_decay_fraction > 0 && c.epsilon_decay_fraction <= 1,
          "0 < epsilon_decay_fraction <= 1");
  require(c.alpha_lo >= 0 && c.alpha_lo <= c.alpha_hi && c.alpha_hi <= 1,
          "0 <= alpha_lo <= alpha_hi <= 1");
  require(c.reward_preset >= 1 && c.reward_preset <= kNumRewardPresets,
          "reward_preset in 1..4");
  require(c.buffer_capacity >= static_cast<std::size_t>(c.batch_size),
          "buffer_capacity >= batch_size");
  require(c.train_every >= 1, "train_every >= 1");
  require(c.warmup_steps >= 0, "warmup_steps >= 0");
  require(c.reward_scale > 0, "reward_scale > 0");
  ValidateModelConfig(c.model);
}

void ValidateRunConfig(const RunConfig& c) {
  ValidateEnvConfig(c.env);
  ValidateTrainConfig(c.train);
  if (c.eval.episodes < 1) throw ConfigError("invalid eval config: episodes >= 1");
  if (c.eval.alpha < 0 || c.eval.alpha > 1) throw ConfigError("invalid eval config: 0 <= alpha <= 1");
  if (c.eval.trials < 1) throw ConfigError("invalid eval config: trials >= 1");
  if (c.eval.noise_runs < 1) throw ConfigError("invalid eval config: noise_runs >= 1");
}

RunConfig DefaultRunConfig() {
  RunConfig c;
  if (const char* dir = std::getenv("MASKQ_OUT_DIR"); dir != nullptr && *dir != '\0') {
    c.output_dir = dir;
  }
  return c;
}

RunConfig ParseConfigText(const std::string& text, FeatureRanges* ranges) {
  // Boost's INI reader only knows ';' comments; drop '#' lines first.
  std::istringstream raw(text);
  std::ostringstream cleaned;
  for (std::string line; std::getline(raw, line);) {
    const std::string t = Trim(line);
    if (!t.empty() && t[0] == '#') continue;
    cleaned << line << '\n';
  }
  boost::property_tree::ptree tree;
  std::istringstream in(cleaned.str());
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ParseError(std::string("config syntax error: ") + e.message() + " (line " +
                     std::to_string(e.line()) + ")");
  }

  RunConfig config = DefaultRunConfig();
  for (const auto& [section, node] : tree) {
    if (node.empty()) throw ParseError("unknown key '" + section + "' (outside any section)");
    if (section == "ranges") {
      if (ranges == nullptr) throw ParseError("unknown section 'ranges'");
      ParseRangesSection(node, *ranges);
      continue;
    }
    for (const auto& [key, child] : node) {
      const Field* field = FindField(section, key);
      if (field == nullptr) throw ParseError("unknown key '" + section + "." + key + "'");
      field->set(config, Trim(child.get_value<std::string>()));
    }
  }
  return config;
}

void ApplyOverride(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ParseError("override must look like key=value: '" + assignment + "'");
  }
  const std::string name = Trim(assignment.substr(0, eq));
  const std::string value = Trim(assignment.substr(eq + 1));
  const auto dot = name.find('.');
  if (dot != std::string::npos) {
    const Field* field = FindField(name.substr(0, dot), name.substr(dot + 1));
    if (field == nullptr) throw ParseError("unknown key '" + name + "'");
    field->set(config, value);
    return;
  }
  const Field* match = nullptr;
  for (const Field& f : Fields()) {
    if (f.key != name) continue;
    if (match != nullptr) {
      throw ParseError("ambiguous key '" + name + "'; qualify it as section." + name);
    }
    match = &f;
  }
  if (match == nullptr) throw ParseError("unknown key '" + name + "'");
  match->set(config, value);
}

RunConfig ParseConfig(const std::string& path, const std::vector<std::string>& overrides) {
  RunConfig config = DefaultRunConfig();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    config = ParseConfigText(buf.str());
  }
  for (const std::string& o : overrides) ApplyOverride(config, o);
  ValidateRunConfig(config);
  return config;
}

std::string FormatConfig(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const Field& f : Fields()) {
    if (f.section != section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get(config) << '\n';
  }
  return out.str();
}

std::string FormatRanges(const FeatureRanges& ranges) {
  std::ostringstream out;
  out << "[ranges]\n";
  for (int f = 0; f < kNumFeatures; ++f) {
    out << FeatureName(f) << " = " << FormatDouble(ranges.lo[f]) << ","
        << FormatDouble(ranges.hi[f]) << '\n';
  }
  return out.str();
}

std::vector<std::string> ConfigKeys() {
  std::vector<std::string> keys;
  for (const Field& f : Fields()) keys.push_back(f.section + "." + f.key);
  return keys;
}

}  // namespace maskq
