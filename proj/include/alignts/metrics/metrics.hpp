// include/alignts/metrics/metrics.hpp

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

#include <span>
#include <vector>

#include "alignts/ctc/ctc.hpp"

namespace alignts::metrics {

struct EditOps {
  int substitutions = 0;
  int deletions = 0;   // present in ref, missing from hyp
  int insertions = 0;  // extra in hyp
};

struct EditResult {
  int distance = 0;
  EditOps ops;
};

// Levenshtein distance with unit costs. Ops come from one optimal alignment;
// ties are broken substitution > deletion > insertion.
EditResult edit_distance(const ctc::PhonemeSeq& hyp, const ctc::PhonemeSeq& ref);

enum class PerSubset { kAll, kCorrectLabeled, kIncorrectLabeled };

struct ScoredPair {
  ctc::PhonemeSeq hyp;
  ctc::PhonemeSeq ref;
  int quality_label = 1;  // 1 = correct, 2..4 = incorrect
};

// 100 * sum(distances) / sum(ref lengths) over the requested subset. Errors
// on an empty subset.
double per_percent(std::span<const ScoredPair> pairs, PerSubset subset);

struct Peak {
  int onset = 0;           // first frame of the run
  int offset = 0;          // last frame of the run (inclusive)
  int dominant_phoneme = 0;
};

struct PeakStats {
  int frames_above_threshold = 0;   // frames with max non-blank posterior > frame threshold
  std::vector<Peak> peaks;          // maximal runs above the peak threshold
  double mean_onset = 0.0;          // meaningful only when has_peaks()

  bool has_peaks() const { return !peaks.empty(); }
};

// A peak is a maximal run of consecutive frames whose max non-blank posterior
// exceeds peak_threshold; its dominant phoneme is the argmax at the run's
// strongest frame.
PeakStats peak_stats(const ctc::Posteriorgram& post, double frame_threshold = 0.1,
                     double peak_threshold = 0.5);

struct DelayReport {
  double mean_frames = 0.0;
  double mean_ms = 0.0;
  int used = 0;      // utterances with peaks on both sides
  int excluded = 0;  // utterances dropped for missing peaks

  bool available() const { return used > 0; }
};

// Per utterance: mean onset of the model's peaks minus the reference's, then
// averaged over utterances. Utterances with zero peaks on either side are
// excluded and counted. ms = frames * 30.
DelayReport delay_relative(std::span<const PeakStats> model_stats,
                           std::span<const PeakStats> reference_stats);

// Mispronounced iff edit distance (against the canonical sequence) is
// strictly greater than the threshold.
bool mdd_classify_mispronounced(const ctc::PhonemeSeq& hyp, const ctc::PhonemeSeq& canonical,
                                int threshold = 1);

struct Prf1 {
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
  double f1 = 0.0;         // percent
  bool no_predicted_positives = false;
  bool no_actual_positives = false;
};

// Standard precision/recall/F1 with "mispronounced" as the positive class.
// Degenerate denominators yield 0 for the affected quantity, flagged.
Prf1 prf1(const std::vector<bool>& predicted_positive, const std::vector<bool>& actual_positive);

// F1 from percent-scale precision and recall: 2PR / (P+R), 0 when P+R == 0.
double f1_score(double precision, double recall);

// Spearman rank correlation (average ranks on ties).
double spearman(std::span<const double> a, std::span<const double> b);

struct MddReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double per = 0.0;
  double cper = 0.0;
  double iper = 0.0;
  double mean_delay_frames = 0.0;
  double mean_delay_ms = 0.0;
  bool delay_available = false;
  int delay_excluded_utts = 0;
  bool no_predicted_positives = false;
  bool no_actual_positives = false;
};

}  // namespace alignts::metrics
