// include/alignts/pipeline/tradeoff.hpp

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

#include "alignts/data/corpus.hpp"
#include "alignts/metrics/report.hpp"
#include "alignts/pipeline/configs.hpp"

namespace alignts::pipeline {

// Latency-accuracy sweep: train a teacher chain once, then one student per
// window/mode, and report each student's F1 and delay relative to the
// align-recipe reference model.
struct TradeoffConfig {
  std::optional<data::CorpusConfig> corpus;  // generate in place...
  std::string corpus_dir;                    // ...or load an existing corpus
  TrainConfig student;                       // loss recipe replaced per run
  std::string teacher_recipe = "ts+align";
  std::vector<int> windows = {-6, -3, 0, 3, 6};
  std::vector<std::string> modes = {"best", "avg"};
};

TradeoffConfig load_tradeoff_config(const std::filesystem::path& path);

struct TradeoffResult {
  std::vector<metrics::ReportRow> rows;  // sorted by delay
};

TradeoffResult run_tradeoff(const TradeoffConfig& config, const std::filesystem::path& out_dir,
                            int threads = 1);

}  // namespace alignts::pipeline
