// include/alignts/ctc/ctc.hpp

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

#include <cstdint>
#include <vector>

#include "alignts/common/error.hpp"
#include "alignts/numerics/tensor.hpp"

namespace alignts::ctc {

// Phoneme ids in [0, V). The blank id is V (always the last output index)
// and never appears in a PhonemeSeq.
struct PhonemeSeq {
  std::vector<int> ids;

  PhonemeSeq() = default;
  explicit PhonemeSeq(std::vector<int> ids_in) : ids(std::move(ids_in)) {}
  size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  bool operator==(const PhonemeSeq& o) const { return ids == o.ids; }
};

// Per-frame distribution over V phonemes + blank.
struct Posteriorgram {
  numerics::Tensor probs;  // [T x (V+1)]
  double frame_duration_ms = 30.0;

  int64_t num_frames() const { return probs.rows(); }
  int64_t num_symbols() const { return probs.cols(); }  // V + 1
  int blank_id() const { return static_cast<int>(probs.cols()) - 1; }
};

// Validates rows sum to 1 within 1e-9 with entries in [0, 1].
Posteriorgram make_posteriorgram(numerics::Tensor probs, double frame_duration_ms = 30.0);

// Raised when T is too short for the blank-augmented label sequence; training
// catches it to skip (and count) the utterance rather than treating the loss
// as infinite.
class CtcInfeasibleError : public Error {
 public:
  CtcInfeasibleError(int64_t frames, int64_t min_frames)
      : Error(str_cat("CTC infeasible: T=", frames, " frames but the label sequence needs at least ",
                      min_frames)),
        frames(frames),
        min_frames(min_frames) {}
  int64_t frames;
  int64_t min_frames;
};

// |labels| plus one frame per adjacent repeated label (the mandatory blank).
int64_t ctc_min_frames(const PhonemeSeq& labels);

struct CtcResult {
  double loss = 0.0;              // -log P(labels | probs)
  numerics::Tensor grad;          // d loss / d log_probs, same shape as input
};

// CTC loss via the forward-backward recursion over the blank-interleaved
// label sequence, computed in log space. `log_probs` is [T x (V+1)] and is
// treated as free parameters (rows need not be normalized); the gradient is
// exact for that parameterization. Throws CtcInfeasibleError when T is too
// short.
CtcResult ctc_loss(const numerics::Tensor& log_probs, const PhonemeSeq& labels);

// Enumeration oracle: sums the probability of every length-T path whose
// collapse equals `labels`. Guarded to (V+1)^T <= 10^7. Throws
// CtcInfeasibleError when no path matches.
double ctc_brute_force(const numerics::Tensor& probs, const PhonemeSeq& labels);

// CTC's many-to-one map: remove adjacent duplicates, then remove blanks.
PhonemeSeq collapse(const std::vector<int>& path, int blank_id);

// Per-frame argmax, then collapse.
PhonemeSeq greedy_decode(const Posteriorgram& post);

}  // namespace alignts::ctc
