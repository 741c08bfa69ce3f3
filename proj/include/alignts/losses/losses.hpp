// include/alignts/losses/losses.hpp

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

#include <optional>
#include <string>
#include <vector>

#include "alignts/ctc/ctc.hpp"
#include "alignts/model/features.hpp"
#include "alignts/numerics/tensor.hpp"

namespace alignts::losses {

// Frames whose energy is strictly below the utterance mean energy.
struct SilenceMask {
  std::vector<bool> is_silence;

  size_t size() const { return is_silence.size(); }
};

SilenceMask silence_mask(const model::FeatureSequence& features);

struct LossGrad {
  double value = 0.0;
  numerics::Tensor grad;
};

// Per-frame score f(t): the probability of the *wrong* behavior --
// P(non-blank) on silence frames, P(blank) on speech frames -- clamped to
// [clamp, 1]. Returns mean(log f) over frames, which the optimizer drives
// toward log(clamp), plus the gradient wrt the posteriorgram probabilities.
LossGrad alignment_penalty(const ctc::Posteriorgram& post, const SilenceMask& mask, double clamp);

// Frame-level teacher-student distance: per frame the squared differences are
// summed over the V+1 logit dimension, then averaged over frames. Teacher is
// constant; the gradient is wrt the student logits.
LossGrad ts_frame_loss(const numerics::Tensor& student_logits,
                       const numerics::Tensor& teacher_logits);

// Signed frame window, relative to the student frame index; negative offsets
// reach past teacher frames. "ts-avg:-6" means lo=-6, hi=0; "ts-avg:+3" means
// lo=0, hi=+3.
struct WindowSpec {
  enum class Mode { kBest, kAvg };
  int lo = 0;
  int hi = 0;
  Mode mode = Mode::kAvg;

  bool operator==(const WindowSpec&) const = default;
};

// Windowed distillation. Per student frame i the candidate teacher frames are
// i+j for j in [lo, hi], clipped to [0, T-1]. Mode kBest uses the closest
// candidate's squared distance; kAvg uses the mean over candidates. Frames
// whose clipped window is empty contribute zero. Total is averaged over
// frames.
LossGrad ts_window_loss(const numerics::Tensor& student_logits,
                        const numerics::Tensor& teacher_logits, const WindowSpec& window);

// Declarative recipe: which terms are enabled and with what weights. The
// named recipes are ctc, align, ts, ts+align, ts-best:N, ts-avg:N (signed N).
// "ts+align" enables all three terms exactly once: the composed total is
// L_CTC + align penalty + TS distance with no double-counted CTC.
struct LossConfig {
  bool use_ctc = true;
  bool use_align = false;
  double align_clamp = 1e-8;
  struct TsTerm {
    std::optional<WindowSpec> window;  // absent = frame-level
  };
  std::optional<TsTerm> ts;
  struct Weights {
    double ctc = 1.0;
    double align = 1.0;
    double ts = 1.0;
  } weights;
  std::string recipe = "ctc";

  bool any_enabled() const { return use_ctc || use_align || ts.has_value(); }
  bool needs_teacher() const { return ts.has_value(); }
};

// Parses a recipe name. Errors on anything unrecognized.
LossConfig parse_recipe(const std::string& recipe);

// Inputs for compose_loss; only the pointers needed by enabled terms must be
// set.
struct LossContext {
  const numerics::Tensor* log_probs = nullptr;        // [T x (V+1)], for CTC
  const ctc::Posteriorgram* posteriorgram = nullptr;  // for the align penalty
  const numerics::Tensor* logits = nullptr;           // student logits, for TS
  const model::FeatureSequence* features = nullptr;   // for the silence mask
  const ctc::PhonemeSeq* labels = nullptr;            // for CTC
  const numerics::Tensor* teacher_logits = nullptr;   // constant
};

struct ComposedLoss {
  double total = 0.0;
  // Gradients of the weighted total wrt each representation actually used.
  std::optional<numerics::Tensor> d_log_probs;
  std::optional<numerics::Tensor> d_probs;
  std::optional<numerics::Tensor> d_logits;
  // Unweighted term values, keyed "ctc" / "align" / "ts".
  std::vector<std::pair<std::string, double>> terms;

  double term(const std::string& name) const;
};

ComposedLoss compose_loss(const LossConfig& config, const LossContext& ctx);

}  // namespace alignts::losses
