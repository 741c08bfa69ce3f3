// src/ctc/ctc.cc

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

#include "alignts/ctc/ctc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alignts/numerics/math.hpp"

namespace alignts::ctc {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

Posteriorgram make_posteriorgram(numerics::Tensor probs, double frame_duration_ms) {
  ALIGNTS_CHECK(probs.rank() == 2, "posteriorgram: expected [T x (V+1)], got ", probs.shape_str());
  for (int64_t r = 0; r < probs.rows(); ++r) {
    double sum = 0.0;
    for (double p : probs.row_span(r)) {
      ALIGNTS_CHECK(p >= 0.0 && p <= 1.0, "posteriorgram: entry ", p, " outside [0,1] in row ", r);
      sum += p;
    }
    ALIGNTS_CHECK(std::abs(sum - 1.0) < 1e-9, "posteriorgram: row ", r, " sums to ", sum);
  }
  return Posteriorgram{std::move(probs), frame_duration_ms};
}

int64_t ctc_min_frames(const PhonemeSeq& labels) {
  int64_t repeats = 0;
  for (size_t i = 1; i < labels.ids.size(); ++i) {
    if (labels.ids[i] == labels.ids[i - 1]) ++repeats;
  }
  return static_cast<int64_t>(labels.ids.size()) + repeats;
}

namespace {

// Blank-interleaved label sequence: blank, l1, blank, l2, ..., blank.
std::vector<int> extended_labels(const PhonemeSeq& labels, int blank) {
  std::vector<int> ext(2 * labels.ids.size() + 1, blank);
  for (size_t i = 0; i < labels.ids.size(); ++i) ext[2 * i + 1] = labels.ids[i];
  return ext;
}

void validate_labels(const PhonemeSeq& labels, int64_t num_symbols) {
  ALIGNTS_CHECK(!labels.empty(), "ctc: empty label sequence");
  for (int id : labels.ids) {
    ALIGNTS_CHECK(id >= 0 && id < num_symbols - 1, "ctc: label id ", id,
                  " outside [0, ", num_symbols - 1, ") (blank is reserved as the last index)");
  }
}

}  // namespace

CtcResult ctc_loss(const numerics::Tensor& log_probs, const PhonemeSeq& labels) {
  ALIGNTS_CHECK(log_probs.rank() == 2, "ctc_loss: expected [T x (V+1)], got ",
                log_probs.shape_str());
  const int64_t T = log_probs.rows();
  const int64_t K = log_probs.cols();
  validate_labels(labels, K);
  const int blank = static_cast<int>(K) - 1;
  const int64_t min_t = ctc_min_frames(labels);
  if (T < min_t) throw CtcInfeasibleError(T, min_t);

  const std::vector<int> ext = extended_labels(labels, blank);
  const int64_t S = static_cast<int64_t>(ext.size());
  auto lp = [&](int64_t t, int s) { return log_probs.at(t, ext[static_cast<size_t>(s)]); };
  auto can_skip = [&](int64_t s) {
    // A diagonal skip s-2 -> s is allowed only onto a non-blank that differs
    // from the previous non-blank.
    return s >= 2 && ext[static_cast<size_t>(s)] != blank &&
           ext[static_cast<size_t>(s)] != ext[static_cast<size_t>(s - 2)];
  };

  // Forward variables, log domain. alpha[t][s] includes the emission at t.
  std::vector<double> alpha(static_cast<size_t>(T * S), kNegInf);
  auto a = [&](int64_t t, int64_t s) -> double& { return alpha[static_cast<size_t>(t * S + s)]; };
  a(0, 0) = lp(0, 0);
  if (S > 1) a(0, 1) = lp(0, 1);
  for (int64_t t = 1; t < T; ++t) {
    for (int64_t s = 0; s < S; ++s) {
      double acc = a(t - 1, s);
      if (s >= 1) acc = numerics::log_add(acc, a(t - 1, s - 1));
      if (can_skip(s)) acc = numerics::log_add(acc, a(t - 1, s - 2));
      a(t, s) = (acc == kNegInf) ? kNegInf : acc + lp(t, static_cast<int>(s));
    }
  }
  double log_p = numerics::log_add(a(T - 1, S - 1), S >= 2 ? a(T - 1, S - 2) : kNegInf);
  ALIGNTS_CHECK(log_p != kNegInf, "ctc_loss: zero total path probability");

  // Backward variables; beta[t][s] also includes the emission at t.
  std::vector<double> beta(static_cast<size_t>(T * S), kNegInf);
  auto b = [&](int64_t t, int64_t s) -> double& { return beta[static_cast<size_t>(t * S + s)]; };
  b(T - 1, S - 1) = lp(T - 1, static_cast<int>(S) - 1);
  if (S >= 2) b(T - 1, S - 2) = lp(T - 1, static_cast<int>(S) - 2);
  for (int64_t t = T - 2; t >= 0; --t) {
    for (int64_t s = S - 1; s >= 0; --s) {
      double acc = b(t + 1, s);
      if (s + 1 < S) acc = numerics::log_add(acc, b(t + 1, s + 1));
      if (s + 2 < S && can_skip(s + 2)) acc = numerics::log_add(acc, b(t + 1, s + 2));
      b(t, s) = (acc == kNegInf) ? kNegInf : acc + lp(t, static_cast<int>(s));
    }
  }

  // Gradient wrt log_probs as free parameters:
  //   d(-log P)/d log_probs[t][k] = -exp(lse_{s: ext[s]=k}(alpha+beta) - lp - log P)
  // (alpha and beta both include the frame-t emission, hence the -lp).
  CtcResult res;
  res.loss = -log_p;
  res.grad = numerics::Tensor(log_probs.shape);
  for (int64_t t = 0; t < T; ++t) {
    std::vector<double> by_symbol(static_cast<size_t>(K), kNegInf);
    for (int64_t s = 0; s < S; ++s) {
      double ab = a(t, s) == kNegInf || b(t, s) == kNegInf ? kNegInf : a(t, s) + b(t, s);
      size_t k = static_cast<size_t>(ext[static_cast<size_t>(s)]);
      by_symbol[k] = numerics::log_add(by_symbol[k], ab);
    }
    for (int64_t k = 0; k < K; ++k) {
      double lse = by_symbol[static_cast<size_t>(k)];
      if (lse == kNegInf) continue;
      res.grad.at(t, k) = -std::exp(lse - log_probs.at(t, k) - log_p);
    }
  }
  return res;
}

double ctc_brute_force(const numerics::Tensor& probs, const PhonemeSeq& labels) {
  ALIGNTS_CHECK(probs.rank() == 2, "ctc_brute_force: expected [T x (V+1)]");
  const int64_t T = probs.rows();
  const int64_t K = probs.cols();
  validate_labels(labels, K);
  const int blank = static_cast<int>(K) - 1;

  double combos = std::pow(static_cast<double>(K), static_cast<double>(T));
  ALIGNTS_CHECK(combos <= 1e7, "ctc_brute_force: (V+1)^T = ", combos, " exceeds the 1e7 guard");

  std::vector<int> path(static_cast<size_t>(T), 0);
  double total = 0.0;
  bool done = false;
  while (!done) {
    double p = 1.0;
    for (int64_t t = 0; t < T; ++t) p *= probs.at(t, path[static_cast<size_t>(t)]);
    if (p > 0.0 && collapse(path, blank) == labels) total += p;
    // Odometer increment.
    int64_t pos = T - 1;
    while (pos >= 0) {
      if (++path[static_cast<size_t>(pos)] < K) break;
      path[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    done = pos < 0;
  }
  if (total <= 0.0) throw CtcInfeasibleError(T, ctc_min_frames(labels));
  return -std::log(total);
}

PhonemeSeq collapse(const std::vector<int>& path, int blank_id) {
  PhonemeSeq out;
  int prev = -1;
  for (int id : path) {
    if (id != prev && id != blank_id) out.ids.push_back(id);
    prev = id;
  }
  return out;
}

PhonemeSeq greedy_decode(const Posteriorgram& post) {
  const int64_t T = post.num_frames();
  const int64_t K = post.num_symbols();
  std::vector<int> path(static_cast<size_t>(T));
  for (int64_t t = 0; t < T; ++t) {
    auto row = post.probs.row_span(t);
    int best = 0;
    for (int64_t k = 1; k < K; ++k) {
      if (row[static_cast<size_t>(k)] > row[static_cast<size_t>(best)]) best = static_cast<int>(k);
    }
    path[static_cast<size_t>(t)] = best;
  }
  return collapse(path, post.blank_id());
}

}  // namespace alignts::ctc
