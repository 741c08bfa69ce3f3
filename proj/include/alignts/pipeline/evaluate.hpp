// include/alignts/pipeline/evaluate.hpp

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

#include <string>
#include <vector>

#include "alignts/data/corpus.hpp"
#include "alignts/metrics/metrics.hpp"
#include "alignts/metrics/report.hpp"
#include "alignts/model/checkpoint.hpp"

namespace alignts::pipeline {

struct EvalResult {
  metrics::MddReport report;
  metrics::ReportRow row;
  std::vector<metrics::PeakStats> stats;        // one per utterance, split order
  std::vector<metrics::ScoredPair> pairs;       // greedy hypotheses vs canonical
  std::vector<bool> predicted_mispronounced;
  std::vector<bool> actual_mispronounced;
};

// Inference-mode forwards, greedy decoding, and every report metric over one
// split. When `reference` is given, delay is measured relative to it (the
// intended reference is the BiGRU trained with the align recipe); otherwise
// the delay fields are flagged unavailable.
EvalResult evaluate(const model::Checkpoint& ckpt, const data::Corpus& corpus,
                    const std::string& split, const model::Checkpoint* reference = nullptr);

// Peak statistics for every utterance of a split.
std::vector<metrics::PeakStats> split_peak_stats(const model::Checkpoint& ckpt,
                                                 const data::Corpus& corpus,
                                                 const std::string& split);

}  // namespace alignts::pipeline
