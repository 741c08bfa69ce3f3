// src/model/checkpoint.cc

// Copyright 2026  alignts authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "alignts/model/checkpoint.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "alignts/common/error.hpp"
#include "alignts/numerics/rng.hpp"

namespace alignts::model {

using numerics::Tensor;

ModelConfig ModelConfig::paper_teacher() {
  ModelConfig c;
  c.layers = 4;
  c.hidden_per_direction = 512;
  c.projection = 100;
  c.dropout = 0.2;
  c.bidirectional = true;
  c.input_dim = 120;
  c.vocab_size = 39;
  return c;
}

ModelConfig ModelConfig::paper_student() {
  ModelConfig c = paper_teacher();
  c.bidirectional = false;
  return c;
}

ModelConfig ModelConfig::desk(bool bidirectional, int input_dim, int vocab_size) {
  ModelConfig c;
  c.layers = 2;
  c.hidden_per_direction = 64;
  c.projection = 32;
  c.dropout = 0.2;
  c.bidirectional = bidirectional;
  c.input_dim = input_dim;
  c.vocab_size = vocab_size;
  return c;
}

numerics::Tensor* Checkpoint::find(const std::string& name) {
  for (auto& [n, t] : weights) {
    if (n == name) return &t;
  }
  return nullptr;
}

const numerics::Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : weights) {
    if (n == name) return &t;
  }
  return nullptr;
}

int64_t Checkpoint::parameter_count() const {
  int64_t n = 0;
  for (const auto& [name, t] : weights) n += t.size();
  return n;
}

namespace {

Tensor uniform_init(numerics::Rng& rng, std::vector<int64_t> shape, int64_t fan_in) {
  Tensor t(std::move(shape));
  const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
  for (double& v : t.values) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

Checkpoint init_checkpoint(const ModelConfig& config, uint64_t seed) {
  ALIGNTS_CHECK(config.layers >= 1 && config.hidden_per_direction >= 1 && config.projection >= 1,
                "init_checkpoint: invalid model sizes");
  ALIGNTS_CHECK(config.input_dim >= 1 && config.vocab_size >= 1,
                "init_checkpoint: invalid input/vocab dims");
  ALIGNTS_CHECK(config.dropout >= 0.0 && config.dropout < 1.0, "init_checkpoint: dropout ",
                config.dropout, " outside [0, 1)");
  Checkpoint ckpt;
  ckpt.config = config;
  ckpt.metadata.seed = seed;

  const int h = config.hidden_per_direction;
  auto add = [&](const std::string& name, Tensor t) { ckpt.weights.emplace_back(name, std::move(t)); };
  // One independent stream per named matrix, keyed by name, so the init of
  // one weight never shifts another's.
  auto init = [&](const std::string& name, std::vector<int64_t> shape, int64_t fan_in) {
    numerics::Rng rng(numerics::derive_seed(seed, "init:" + name));
    add(name, uniform_init(rng, std::move(shape), fan_in));
  };

  int in_dim = config.input_dim;
  for (int layer = 0; layer < config.layers; ++layer) {
    for (int dir = 0; dir < config.directions(); ++dir) {
      const std::string prefix =
          "gru" + std::to_string(layer) + "." + (dir == 0 ? "fwd" : "bwd") + ".";
      init(prefix + "w_ih", {3 * h, in_dim}, in_dim);
      init(prefix + "w_hh", {3 * h, h}, h);
      add(prefix + "b_ih", Tensor({3 * h}));
      add(prefix + "b_hh", Tensor({3 * h}));
    }
    const int gru_out = h * config.directions();
    init("proj" + std::to_string(layer) + ".w", {config.projection, gru_out}, gru_out);
    add("proj" + std::to_string(layer) + ".b", Tensor({config.projection}));
    in_dim = config.projection;
  }
  init("out.w", {config.output_dim(), config.projection}, config.projection);
  add("out.b", Tensor({config.output_dim()}));
  return ckpt;
}

namespace {

constexpr char kCkptMagic[4] = {'A', 'T', 'S', 'C'};

nlohmann::json config_to_json(const ModelConfig& c) {
  return nlohmann::json{{"layers", c.layers},
                        {"hidden_per_direction", c.hidden_per_direction},
                        {"projection", c.projection},
                        {"dropout", c.dropout},
                        {"bidirectional", c.bidirectional},
                        {"input_dim", c.input_dim},
                        {"vocab_size", c.vocab_size}};
}

ModelConfig config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  c.layers = j.at("layers").get<int>();
  c.hidden_per_direction = j.at("hidden_per_direction").get<int>();
  c.projection = j.at("projection").get<int>();
  c.dropout = j.at("dropout").get<double>();
  c.bidirectional = j.at("bidirectional").get<bool>();
  c.input_dim = j.at("input_dim").get<int>();
  c.vocab_size = j.at("vocab_size").get<int>();
  return c;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  ALIGNTS_CHECK(os.is_open(), "cannot open for writing: ", path.string());
  os.write(kCkptMagic, 4);
  io::write_u32(os, Checkpoint::kFormatVersion);
  nlohmann::json header{{"config", config_to_json(ckpt.config)},
                        {"metadata",
                         {{"recipe", ckpt.metadata.recipe},
                          {"seed", ckpt.metadata.seed},
                          {"epoch", ckpt.metadata.epoch}}}};
  const std::string header_str = header.dump();
  io::write_u64(os, header_str.size());
  io::write_bytes(os, header_str);
  io::write_tensor_block(os, ckpt.weights);
  os.close();
  ALIGNTS_CHECK(os.good(), "checkpoint write failed: ", path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  ALIGNTS_CHECK(is.is_open(), "cannot open: ", path.string());
  char magic[4] = {};
  is.read(magic, 4);
  ALIGNTS_CHECK(is.good() && std::memcmp(magic, kCkptMagic, 4) == 0,
                "not a checkpoint file: ", path.string());
  uint32_t version = io::read_u32(is);
  ALIGNTS_CHECK(version == Checkpoint::kFormatVersion, "checkpoint ", path.string(),
                ": unknown format_version ", version);
  uint64_t header_len = io::read_u64(is);
  ALIGNTS_CHECK(header_len <= (1u << 20), "checkpoint header too large: ", header_len);
  const std::string header_str = io::read_bytes(is, header_len);
  nlohmann::json header = nlohmann::json::parse(header_str);

  Checkpoint ckpt;
  ckpt.config = config_from_json(header.at("config"));
  const auto& meta = header.at("metadata");
  ckpt.metadata.recipe = meta.at("recipe").get<std::string>();
  ckpt.metadata.seed = meta.at("seed").get<uint64_t>();
  ckpt.metadata.epoch = meta.at("epoch").get<int>();
  ckpt.weights = io::read_tensor_block(is);
  return ckpt;
}

}  // namespace alignts::model
