/*
 * Copyright 2026 The walkjoin Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <fstream>

#include "walkjoin/binary_io.hpp"
#include "walkjoin/encoder.hpp"
#include "walkjoin/store.hpp"

namespace walkjoin {

namespace {

void write_params(BinaryWriter& w, const ModelParams& p) {
  p.for_each([&](std::string_view, const Eigen::MatrixXd& t) {
    w.put<std::uint64_t>(static_cast<std::uint64_t>(t.rows()));
    w.put<std::uint64_t>(static_cast<std::uint64_t>(t.cols()));
    w.put_array<double>(std::span<const double>(t.data(), static_cast<std::size_t>(t.size())));
  });
}

void read_params(BinaryReader& r, ModelParams& p) {
  p.for_each([&](std::string_view name, Eigen::MatrixXd& t) {
    const auto rows = r.get<std::uint64_t>("tensor rows");
    const auto cols = r.get<std::uint64_t>("tensor cols");
    if (rows != static_cast<std::uint64_t>(t.rows()) || cols != static_cast<std::uint64_t>(t.cols())) {
      throw FormatError("checkpoint tensor " + std::string(name) + " has the wrong shape");
    }
    auto values = r.get_array<double>(rows * cols, "tensor values");
    t = Eigen::Map<Eigen::MatrixXd>(values.data(), t.rows(), t.cols());
  });
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  BinaryWriter w(out);
  const ModelConfig& c = ckpt.params.config;
  w.bytes(kCheckpointMagic, 4);
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put<std::uint32_t>(c.arity);
  w.put<std::uint32_t>(c.num_walks);
  w.put<std::uint32_t>(c.steps);
  w.put<std::uint32_t>(c.hidden);
  w.put<std::uint32_t>(c.feature_dim);
  w.put<double>(c.dropout);
  write_params(w, ckpt.params);
  const AdamState& s = ckpt.optimizer;
  w.put<double>(s.lr);
  w.put<double>(s.beta1);
  w.put<double>(s.beta2);
  w.put<double>(s.epsilon);
  w.put<std::uint64_t>(s.step);
  write_params(w, s.first);
  write_params(w, s.second);
  w.check();
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  BinaryReader r(in);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (!std::equal(magic, magic + 4, kCheckpointMagic)) throw FormatError("not a model checkpoint (bad magic)");
  const auto version = r.get<std::uint32_t>("version");
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  ModelConfig c;
  c.arity = r.get<std::uint32_t>("arity");
  c.num_walks = r.get<std::uint32_t>("M");
  c.steps = r.get<std::uint32_t>("m");
  c.hidden = r.get<std::uint32_t>("hidden");
  c.feature_dim = r.get<std::uint32_t>("feature dim");
  c.dropout = r.get<double>("dropout");
  if (c.arity < 1 || c.steps < 1 || c.hidden < 1 || c.hidden > (1u << 16)) {
    throw FormatError("corrupt model configuration");
  }
  Checkpoint ckpt{ModelParams::zeros(c), {}};
  read_params(r, ckpt.params);
  AdamState& s = ckpt.optimizer;
  s = AdamState::for_params(ckpt.params, 0.0);
  s.lr = r.get<double>("lr");
  s.beta1 = r.get<double>("beta1");
  s.beta2 = r.get<double>("beta2");
  s.epsilon = r.get<double>("epsilon");
  s.step = r.get<std::uint64_t>("step");
  read_params(r, s.first);
  read_params(r, s.second);
  if (!r.at_eof()) throw FormatError("trailing bytes after checkpoint body");
  return ckpt;
}

void check_compatible(const ModelConfig& config, const SubgraphStore& store) {
  if (config.num_walks != store.shape().num_walks || config.steps != store.shape().steps) {
    throw InvalidArgument("model trained with M=" + std::to_string(config.num_walks) +
                          ", m=" + std::to_string(config.steps) + " but store has M=" +
                          std::to_string(store.shape().num_walks) +
                          ", m=" + std::to_string(store.shape().steps));
  }
}

}  // namespace walkjoin
