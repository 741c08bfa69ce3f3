// include/alignts/pipeline/trainer.hpp

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
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alignts/data/corpus.hpp"
#include "alignts/model/checkpoint.hpp"
#include "alignts/pipeline/configs.hpp"

namespace alignts::pipeline {

struct EpochRecord {
  int epoch = 0;         // 1-based
  double train_loss = 0.0;
  double dev_per = 0.0;
  double lr = 0.0;       // value used during this epoch
  double wall_ms = 0.0;  // excluded from the canonical serialization
  int samples_used = 0;
  int skipped_infeasible = 0;
};

// Per-run record. canonical_json() is byte-reproducible for identical
// (config, seed); wall-clock timing lives only in full_json().
struct RunLog {
  nlohmann::json config_snapshot;
  std::vector<EpochRecord> epochs;
  std::string final_checkpoint;
  int skipped_non_label1 = 0;  // utterances excluded by the label-1 filter

  std::string canonical_json() const;
  std::string full_json() const;
  void save(const std::filesystem::path& path) const;  // writes full_json
};

struct TrainResult {
  model::Checkpoint checkpoint;
  RunLog log;
};

struct TrainOptions {
  const model::Checkpoint* teacher = nullptr;
  // When non-empty, teacher logits are cached here as one file per
  // (utterance, stack ordering) and reused across epochs and runs.
  std::filesystem::path teacher_cache_dir;
  int threads = 1;  // batch members run concurrently; reduction order is fixed
};

// Adam training over the label-1 utterances of corpus.train, with the LR
// schedule: starting with epoch `lr_halving_start_epoch`, the LR halves after
// any epoch whose dev PER exceeds the comparison value. The final-epoch
// checkpoint is returned. Teacher logits (if a TS term is enabled) are
// computed in inference mode and treated as constants.
TrainResult train(const TrainConfig& config, const data::Corpus& corpus,
                  const TrainOptions& options = {});

// train() with the teacher supplied and its logits cached per utterance.
TrainResult distill(const model::Checkpoint& teacher, const TrainConfig& student_config,
                    const data::Corpus& corpus, const std::filesystem::path& cache_dir,
                    int threads = 1);

}  // namespace alignts::pipeline
