// src/pipeline/evaluate.cc

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

#include "alignts/pipeline/evaluate.hpp"

#include "alignts/ctc/ctc.hpp"
#include "alignts/model/network.hpp"
#include "alignts/numerics/math.hpp"

namespace alignts::pipeline {

using data::Utterance;

std::vector<metrics::PeakStats> split_peak_stats(const model::Checkpoint& ckpt,
                                                 const data::Corpus& corpus,
                                                 const std::string& split) {
  const std::vector<Utterance>& utts = corpus.split(split);
  std::vector<metrics::PeakStats> stats;
  stats.reserve(utts.size());
  for (const Utterance& utt : utts) {
    numerics::Tensor logits = model::model_logits(ckpt, utt.features);
    ctc::Posteriorgram post{numerics::softmax_rows(logits), utt.features.frame_duration_ms};
    stats.push_back(metrics::peak_stats(post));
  }
  return stats;
}

EvalResult evaluate(const model::Checkpoint& ckpt, const data::Corpus& corpus,
                    const std::string& split, const model::Checkpoint* reference) {
  const std::vector<Utterance>& utts = corpus.split(split);
  ALIGNTS_CHECK(!utts.empty(), "evaluate: split '", split, "' is empty");

  EvalResult out;
  out.stats.reserve(utts.size());
  out.pairs.reserve(utts.size());
  int correct_labeled = 0, incorrect_labeled = 0;
  for (const Utterance& utt : utts) {
    numerics::Tensor logits = model::model_logits(ckpt, utt.features);
    ctc::Posteriorgram post{numerics::softmax_rows(logits), utt.features.frame_duration_ms};
    ctc::PhonemeSeq hyp = ctc::greedy_decode(post);
    out.stats.push_back(metrics::peak_stats(post));
    out.pairs.push_back({hyp, utt.canonical, utt.quality_label});
    out.predicted_mispronounced.push_back(metrics::mdd_classify_mispronounced(hyp, utt.canonical));
    out.actual_mispronounced.push_back(utt.quality_label != 1);
    (utt.quality_label == 1 ? correct_labeled : incorrect_labeled) += 1;
  }

  metrics::MddReport& rep = out.report;
  rep.per = metrics::per_percent(out.pairs, metrics::PerSubset::kAll);
  rep.cper = correct_labeled > 0
                 ? metrics::per_percent(out.pairs, metrics::PerSubset::kCorrectLabeled)
                 : 0.0;
  rep.iper = incorrect_labeled > 0
                 ? metrics::per_percent(out.pairs, metrics::PerSubset::kIncorrectLabeled)
                 : 0.0;
  {
    metrics::Prf1 prf = metrics::prf1(out.predicted_mispronounced, out.actual_mispronounced);
    rep.precision = prf.precision;
    rep.recall = prf.recall;
    rep.f1 = prf.f1;
    rep.no_predicted_positives = prf.no_predicted_positives;
    rep.no_actual_positives = prf.no_actual_positives;
  }

  if (reference != nullptr) {
    std::vector<metrics::PeakStats> ref_stats = split_peak_stats(*reference, corpus, split);
    metrics::DelayReport delay = metrics::delay_relative(out.stats, ref_stats);
    rep.delay_available = delay.available();
    rep.mean_delay_frames = delay.mean_frames;
    rep.mean_delay_ms = delay.mean_ms;
    rep.delay_excluded_utts = delay.excluded;
  }

  metrics::ReportRow& row = out.row;
  row.model = ckpt.config.bidirectional ? "bigru" : "unigru";
  row.recipe = ckpt.metadata.recipe.empty() ? "untrained" : ckpt.metadata.recipe;
  double frames = 0.0, peaks = 0.0;
  for (const metrics::PeakStats& s : out.stats) {
    frames += s.frames_above_threshold;
    peaks += static_cast<double>(s.peaks.size());
  }
  row.frames = frames / static_cast<double>(out.stats.size());
  row.peaks = peaks / static_cast<double>(out.stats.size());
  row.delay_available = rep.delay_available;
  row.delay_frames = rep.mean_delay_frames;
  row.delay_ms = rep.mean_delay_ms;
  row.per = rep.per;
  row.cper = rep.cper;
  row.iper = rep.iper;
  row.precision = rep.precision;
  row.recall = rep.recall;
  row.f1 = rep.f1;
  return out;
}

}  // namespace alignts::pipeline
