// src/metrics/metrics.cc

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

#include "alignts/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "alignts/common/error.hpp"
#include "alignts/model/features.hpp"

namespace alignts::metrics {

EditResult edit_distance(const ctc::PhonemeSeq& hyp, const ctc::PhonemeSeq& ref) {
  const size_t n = hyp.size();
  const size_t m = ref.size();
  // Full DP matrix; kept whole for the backtrace.
  std::vector<int> d((n + 1) * (m + 1));
  auto cell = [&](size_t i, size_t j) -> int& { return d[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) cell(i, 0) = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) cell(0, j) = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const int sub = cell(i - 1, j - 1) + (hyp.ids[i - 1] == ref.ids[j - 1] ? 0 : 1);
      const int del = cell(i, j - 1) + 1;  // ref symbol unmatched
      const int ins = cell(i - 1, j) + 1;  // extra hyp symbol
      cell(i, j) = std::min({sub, del, ins});
    }
  }

  EditResult out;
  out.distance = cell(n, m);
  // Backtrace one optimal alignment; preference on ties: substitution (or
  // match), then deletion, then insertion.
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const int match_cost = hyp.ids[i - 1] == ref.ids[j - 1] ? 0 : 1;
      if (cell(i, j) == cell(i - 1, j - 1) + match_cost) {
        if (match_cost == 1) ++out.ops.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && cell(i, j) == cell(i, j - 1) + 1) {
      ++out.ops.deletions;
      --j;
      continue;
    }
    ++out.ops.insertions;
    --i;
  }
  return out;
}

double per_percent(std::span<const ScoredPair> pairs, PerSubset subset) {
  int64_t dist_sum = 0;
  int64_t ref_len_sum = 0;
  int used = 0;
  for (const ScoredPair& p : pairs) {
    const bool correct = p.quality_label == 1;
    if (subset == PerSubset::kCorrectLabeled && !correct) continue;
    if (subset == PerSubset::kIncorrectLabeled && correct) continue;
    ALIGNTS_CHECK(!p.ref.empty(), "per: empty reference sequence");
    dist_sum += edit_distance(p.hyp, p.ref).distance;
    ref_len_sum += static_cast<int64_t>(p.ref.size());
    ++used;
  }
  ALIGNTS_CHECK(used > 0, "per: empty subset");
  return 100.0 * static_cast<double>(dist_sum) / static_cast<double>(ref_len_sum);
}

PeakStats peak_stats(const ctc::Posteriorgram& post, double frame_threshold,
                     double peak_threshold) {
  ALIGNTS_CHECK(frame_threshold > 0.0 && frame_threshold < 1.0 && peak_threshold > 0.0 &&
                    peak_threshold < 1.0,
                "peak_stats: thresholds must lie in (0, 1)");
  const int64_t t_len = post.num_frames();
  const int64_t k = post.num_symbols();
  const int blank = post.blank_id();

  PeakStats out;
  std::vector<double> best_prob(static_cast<size_t>(t_len));
  std::vector<int> best_sym(static_cast<size_t>(t_len));
  for (int64_t t = 0; t < t_len; ++t) {
    double best = -1.0;
    int sym = 0;
    for (int64_t c = 0; c < k; ++c) {
      if (c == blank) continue;
      const double p = post.probs.at(t, c);
      if (p > best) {
        best = p;
        sym = static_cast<int>(c);
      }
    }
    best_prob[static_cast<size_t>(t)] = best;
    best_sym[static_cast<size_t>(t)] = sym;
    if (best > frame_threshold) ++out.frames_above_threshold;
  }

  int64_t t = 0;
  while (t < t_len) {
    if (best_prob[static_cast<size_t>(t)] <= peak_threshold) {
      ++t;
      continue;
    }
    Peak peak;
    peak.onset = static_cast<int>(t);
    int64_t strongest = t;
    while (t < t_len && best_prob[static_cast<size_t>(t)] > peak_threshold) {
      if (best_prob[static_cast<size_t>(t)] > best_prob[static_cast<size_t>(strongest)]) {
        strongest = t;
      }
      ++t;
    }
    peak.offset = static_cast<int>(t - 1);
    peak.dominant_phoneme = best_sym[static_cast<size_t>(strongest)];
    out.peaks.push_back(peak);
  }
  if (!out.peaks.empty()) {
    double sum = 0.0;
    for (const Peak& p : out.peaks) sum += static_cast<double>(p.onset);
    out.mean_onset = sum / static_cast<double>(out.peaks.size());
  }
  return out;
}

DelayReport delay_relative(std::span<const PeakStats> model_stats,
                           std::span<const PeakStats> reference_stats) {
  ALIGNTS_CHECK(model_stats.size() == reference_stats.size(),
                "delay_relative: utterance lists differ: ", model_stats.size(), " vs ",
                reference_stats.size());
  DelayReport out;
  double sum = 0.0;
  for (size_t i = 0; i < model_stats.size(); ++i) {
    if (!model_stats[i].has_peaks() || !reference_stats[i].has_peaks()) {
      ++out.excluded;
      continue;
    }
    sum += model_stats[i].mean_onset - reference_stats[i].mean_onset;
    ++out.used;
  }
  if (out.used > 0) {
    out.mean_frames = sum / static_cast<double>(out.used);
    out.mean_ms = out.mean_frames * model::kStackedFrameMs;
  }
  return out;
}

bool mdd_classify_mispronounced(const ctc::PhonemeSeq& hyp, const ctc::PhonemeSeq& canonical,
                                int threshold) {
  return edit_distance(hyp, canonical).distance > threshold;
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  if (denom <= 0.0) return 0.0;
  return 2.0 * precision * recall / denom;
}

Prf1 prf1(const std::vector<bool>& predicted_positive, const std::vector<bool>& actual_positive) {
  ALIGNTS_CHECK(predicted_positive.size() == actual_positive.size(),
                "prf1: prediction/label lengths differ: ", predicted_positive.size(), " vs ",
                actual_positive.size());
  int tp = 0, fp = 0, fn = 0;
  for (size_t i = 0; i < predicted_positive.size(); ++i) {
    if (predicted_positive[i] && actual_positive[i]) ++tp;
    if (predicted_positive[i] && !actual_positive[i]) ++fp;
    if (!predicted_positive[i] && actual_positive[i]) ++fn;
  }
  Prf1 out;
  if (tp + fp == 0) {
    out.no_predicted_positives = true;
  } else {
    out.precision = 100.0 * tp / static_cast<double>(tp + fp);
  }
  if (tp + fn == 0) {
    out.no_actual_positives = true;
  } else {
    out.recall = 100.0 * tp / static_cast<double>(tp + fn);
  }
  out.f1 = f1_score(out.precision, out.recall);
  return out;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  ALIGNTS_CHECK(a.size() == b.size() && a.size() >= 2, "spearman: need two equal-length series");
  auto ranks = [](std::span<const double> x) {
    const size_t n = x.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) { return x[i] < x[j]; });
    std::vector<double> r(n);
    size_t i = 0;
    while (i < n) {
      size_t j = i;
      while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank, 1-based
      for (size_t s = i; s <= j; ++s) r[order[s]] = avg;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> ra = ranks(a);
  const std::vector<double> rb = ranks(b);
  const double n = static_cast<double>(a.size());
  double mean = (n + 1.0) / 2.0;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  ALIGNTS_CHECK(va > 0.0 && vb > 0.0, "spearman: a series is constant");
  return cov / std::sqrt(va * vb);
}

}  // namespace alignts::metrics
