// include/alignts/pipeline/configs.hpp

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

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "alignts/losses/losses.hpp"
#include "alignts/model/checkpoint.hpp"

namespace alignts::pipeline {

struct TrainConfig {
  model::ModelConfig model;
  losses::LossConfig loss;
  int epochs = 25;
  double lr = 0.0005;
  int lr_halving_start_epoch = 8;
  // "previous" compares each epoch's dev PER against the one before it;
  // "best" compares against the best seen so far.
  std::string lr_halving_compare = "previous";
  int batch_size = 16;
  uint64_t seed = 0;
  std::string corpus;  // path to a generated corpus; the CLI may override
  bool augmentation = false;  // train on all three stack orderings

  void validate() const;
};

nlohmann::json model_config_to_json(const model::ModelConfig& c);
model::ModelConfig model_config_from_json(const nlohmann::json& j);  // strict keys

nlohmann::json loss_config_to_json(const losses::LossConfig& c);
losses::LossConfig loss_config_from_json(const nlohmann::json& j);  // strict keys

nlohmann::json train_config_to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j);  // strict keys
TrainConfig load_train_config(const std::filesystem::path& path);

}  // namespace alignts::pipeline
