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
#include "maskq/checkpoint.h"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "maskq/errors.h"

namespace maskq {
namespace {

class Writer {
 public:
  void U32(std::uint32_t x) { Bytes(x, 4); }
  void U64(std::uint64_t x) { Bytes(x, 8); }
  void F64(double x) { U64(std::bit_cast<std::uint64_t>(x)); }
  void Str(const std::string& s) {
    U64(s.size());
    out_.append(s);
  }
  void Raw(const char* data, std::size_t n) { out_.append(data, n); }
  void Tensors(const std::vector<Tensor>& tensors) {
    U32(static_cast<std::uint32_t>(tensors.size()));
    for (const Tensor& t : tensors) {
      Str(t.name);
      U64(static_cast<std::uint64_t>(t.value.rows()));
      U64(static_cast<std::uint64_t>(t.value.cols()));
      for (Eigen::Index i = 0; i < t.value.size(); ++i) F64(t.value.data()[i]);
    }
  }
  std::string Take() { return std::move(out_); }

 private:
  void Bytes(std::uint64_t x, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(const std::string& in) : in_(in) {}

  std::uint32_t U32() { return static_cast<std::uint32_t>(Bytes(4)); }
  std::uint64_t U64() { return Bytes(8); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Str() {
    const std::uint64_t n = U64();
    Need(n, "string");
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string Raw(std::size_t n) {
    Need(n, "header");
    std::string s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::vector<Tensor> Tensors(const char* what) {
    const std::uint32_t count = U32();
    std::vector<Tensor> out;
    for (std::uint32_t k = 0; k < count; ++k) {
      Tensor t;
      t.name = Str();
      const std::uint64_t rows = U64();
      const std::uint64_t cols = U64();
      if (rows > (1u << 24) || cols > (1u << 24) || rows * cols > remaining() / 8) {
        throw FormatError(std::string("truncated or corrupt ") + what + " tensor '" + t.name +
                          "'");
      }
      t.value.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
      for (Eigen::Index i = 0; i < t.value.size(); ++i) t.value.data()[i] = F64();
      out.push_back(std::move(t));
    }
    return out;
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void Need(std::uint64_t n, const char* what) {
    if (n > remaining()) {
      throw FormatError(std::string("checkpoint truncated while reading ") + what);
    }
  }
  std::uint64_t Bytes(int n) {
    Need(static_cast<std::uint64_t>(n), "integer");
    std::uint64_t x = 0;
    for (int i = 0; i < n; ++i) {
      x |= static_cast<std::uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    }
    pos_ += n;
    return x;
  }

  const std::string& in_;
  std::size_t pos_ = 0;
};

constexpr std::size_t kMagicLen = sizeof(kCheckpointMagic) - 1;

}  // namespace

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  Writer w;
  w.Raw(kCheckpointMagic, kMagicLen);
  w.U32(kCheckpointVersion);
  w.Str(FormatConfig(ckpt.config) + "\n" + FormatRanges(ckpt.ranges));
  w.Tensors(ckpt.online);
  w.Tensors(ckpt.target);
  w.F64(ckpt.adam.learning_rate);
  w.F64(ckpt.adam.beta1);
  w.F64(ckpt.adam.beta2);
  w.F64(ckpt.adam.epsilon);
  w.U64(static_cast<std::uint64_t>(ckpt.adam_step));
  w.Tensors(ckpt.adam_m);
  w.Tensors(ckpt.adam_v);
  w.U32(static_cast<std::uint32_t>(ckpt.rng_streams.size()));
  for (const auto& [name, state] : ckpt.rng_streams) {
    w.Str(name);
    w.Str(state);
  }
  w.U64(static_cast<std::uint64_t>(ckpt.train_steps));
  w.U64(static_cast<std::uint64_t>(ckpt.episodes_done));
  return w.Take();
}

Checkpoint DeserializeCheckpoint(const std::string& bytes) {
  if (bytes.size() < kMagicLen || bytes.compare(0, kMagicLen, kCheckpointMagic) != 0) {
    throw FormatError("not a checkpoint: bad magic");
  }
  Reader r(bytes);
  r.Raw(kMagicLen);
  const std::uint32_t version = r.U32();
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  Checkpoint c;
  const std::string config_text = r.Str();
  try {
    c.config = ParseConfigText(config_text, &c.ranges);
  } catch (const ParseError& e) {
    throw FormatError(std::string("corrupt checkpoint config: ") + e.what());
  }
  c.online = r.Tensors("online");
  c.target = r.Tensors("target");
  c.adam.learning_rate = r.F64();
  c.adam.beta1 = r.F64();
  c.adam.beta2 = r.F64();
  c.adam.epsilon = r.F64();
  c.adam_step = static_cast<std::int64_t>(r.U64());
  c.adam_m = r.Tensors("adam first-moment");
  c.adam_v = r.Tensors("adam second-moment");
  const std::uint32_t streams = r.U32();
  for (std::uint32_t i = 0; i < streams; ++i) {
    std::string name = r.Str();
    std::string state = r.Str();
    c.rng_streams.emplace_back(std::move(name), std::move(state));
  }
  c.train_steps = static_cast<std::int64_t>(r.U64());
  c.episodes_done = static_cast<std::int64_t>(r.U64());
  if (r.remaining() != 0) throw FormatError("trailing bytes after checkpoint payload");

  // The declared architecture must match every stored table.
  auto expected = MakeNetwork(c.config.train.model, 0);
  auto check = [&](const std::vector<Tensor>& tensors, const char* what) {
    ParamSet probe = expected->params().ZerosLike();
    try {
      probe.AssignFrom(tensors);
    } catch (const CompatibilityError& e) {
      throw CompatibilityError(std::string("checkpoint ") + what + " table: " + e.what());
    }
  };
  check(c.online, "online");
  check(c.target, "target");
  check(c.adam_m, "adam_m");
  check(c.adam_v, "adam_v");
  return c;
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  const std::string bytes = SerializeCheckpoint(ckpt);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write checkpoint '" + tmp + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read checkpoint '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return DeserializeCheckpoint(buf.str());
}

std::unique_ptr<QNetwork> RestoreNetwork(const Checkpoint& ckpt) {
  auto net = MakeNetwork(ckpt.config.train.model, 0);
  LoadWeights(ckpt, *net);
  return net;
}

void LoadWeights(const Checkpoint& ckpt, QNetwork& net) { net.params().AssignFrom(ckpt.online); }

}  // namespace maskq
