// src/pipeline/configs.cc

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

#include "alignts/pipeline/configs.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignts/common/error.hpp"

namespace alignts::pipeline {

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      raise(where, ": unknown key '", key, "'");
    }
  }
}

}  // namespace

void TrainConfig::validate() const {
  ALIGNTS_CHECK(epochs >= 0, "train config: negative epochs");
  ALIGNTS_CHECK(lr > 0.0, "train config: lr must be positive");
  ALIGNTS_CHECK(lr_halving_start_epoch >= 1, "train config: lr_halving_start_epoch must be >= 1");
  ALIGNTS_CHECK(lr_halving_compare == "previous" || lr_halving_compare == "best",
                "train config: lr_halving_compare must be 'previous' or 'best'");
  ALIGNTS_CHECK(batch_size >= 1, "train config: batch_size must be >= 1");
  ALIGNTS_CHECK(loss.any_enabled(), "train config: no loss term enabled");
}

nlohmann::json model_config_to_json(const model::ModelConfig& c) {
  return nlohmann::json{{"layers", c.layers},
                        {"hidden_per_direction", c.hidden_per_direction},
                        {"projection", c.projection},
                        {"dropout", c.dropout},
                        {"bidirectional", c.bidirectional},
                        {"input_dim", c.input_dim},
                        {"vocab_size", c.vocab_size}};
}

model::ModelConfig model_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"layers", "hidden_per_direction", "projection", "dropout", "bidirectional",
                       "input_dim", "vocab_size"},
                      "model config");
  model::ModelConfig c;
  if (j.contains("layers")) c.layers = j.at("layers").get<int>();
  if (j.contains("hidden_per_direction")) c.hidden_per_direction = j.at("hidden_per_direction").get<int>();
  if (j.contains("projection")) c.projection = j.at("projection").get<int>();
  if (j.contains("dropout")) c.dropout = j.at("dropout").get<double>();
  if (j.contains("bidirectional")) c.bidirectional = j.at("bidirectional").get<bool>();
  if (j.contains("input_dim")) c.input_dim = j.at("input_dim").get<int>();
  if (j.contains("vocab_size")) c.vocab_size = j.at("vocab_size").get<int>();
  return c;
}

nlohmann::json loss_config_to_json(const losses::LossConfig& c) {
  return nlohmann::json{{"recipe", c.recipe},
                        {"align_clamp", c.align_clamp},
                        {"weights",
                         {{"ctc", c.weights.ctc}, {"align", c.weights.align}, {"ts", c.weights.ts}}}};
}

losses::LossConfig loss_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j, {"recipe", "align_clamp", "weights"}, "loss config");
  ALIGNTS_CHECK(j.contains("recipe"), "loss config: missing 'recipe'");
  losses::LossConfig c = losses::parse_recipe(j.at("recipe").get<std::string>());
  if (j.contains("align_clamp")) {
    c.align_clamp = j.at("align_clamp").get<double>();
    ALIGNTS_CHECK(c.align_clamp > 0.0 && c.align_clamp < 1.0, "loss config: align_clamp ",
                  c.align_clamp, " outside (0, 1)");
  }
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    reject_unknown_keys(w, {"ctc", "align", "ts"}, "loss config weights");
    if (w.contains("ctc")) c.weights.ctc = w.at("ctc").get<double>();
    if (w.contains("align")) c.weights.align = w.at("align").get<double>();
    if (w.contains("ts")) c.weights.ts = w.at("ts").get<double>();
  }
  return c;
}

nlohmann::json train_config_to_json(const TrainConfig& c) {
  return nlohmann::json{{"model", model_config_to_json(c.model)},
                        {"loss", loss_config_to_json(c.loss)},
                        {"epochs", c.epochs},
                        {"lr", c.lr},
                        {"lr_halving_start_epoch", c.lr_halving_start_epoch},
                        {"lr_halving_compare", c.lr_halving_compare},
                        {"batch_size", c.batch_size},
                        {"seed", c.seed},
                        {"corpus", c.corpus},
                        {"augmentation", c.augmentation}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  reject_unknown_keys(j,
                      {"model", "loss", "epochs", "lr", "lr_halving_start_epoch",
                       "lr_halving_compare", "batch_size", "seed", "corpus", "augmentation"},
                      "train config");
  TrainConfig c;
  if (j.contains("model")) c.model = model_config_from_json(j.at("model"));
  if (j.contains("loss")) c.loss = loss_config_from_json(j.at("loss"));
  if (j.contains("epochs")) c.epochs = j.at("epochs").get<int>();
  if (j.contains("lr")) c.lr = j.at("lr").get<double>();
  if (j.contains("lr_halving_start_epoch")) c.lr_halving_start_epoch = j.at("lr_halving_start_epoch").get<int>();
  if (j.contains("lr_halving_compare")) c.lr_halving_compare = j.at("lr_halving_compare").get<std::string>();
  if (j.contains("batch_size")) c.batch_size = j.at("batch_size").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
  if (j.contains("corpus")) c.corpus = j.at("corpus").get<std::string>();
  if (j.contains("augmentation")) c.augmentation = j.at("augmentation").get<bool>();
  c.validate();
  return c;
}

TrainConfig load_train_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  ALIGNTS_CHECK(is.is_open(), "cannot open config: ", path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const std::exception& e) {
    raise("config ", path.string(), ": ", e.what());
  }
  return train_config_from_json(j);
}

}  // namespace alignts::pipeline
