// include/alignts/model/network.hpp

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
#include <utility>
#include <vector>

#include "alignts/model/checkpoint.hpp"
#include "alignts/model/features.hpp"
#include "alignts/numerics/rng.hpp"
#include "alignts/numerics/tape.hpp"

namespace alignts::model {

enum class Direction { kForward, kBackward };

struct GruWeights {
  numerics::Var w_ih;  // [3H x d_in], gate order: reset, update, candidate
  numerics::Var w_hh;  // [3H x H]
  numerics::Var b_ih;  // [3H]
  numerics::Var b_hh;  // [3H]
};

// Standard GRU recurrence from a zero initial state:
//   r = sigmoid(W_ir x + b_ir + W_hr h + b_hr)
//   z = sigmoid(W_iz x + b_iz + W_hz h + b_hz)
//   n = tanh(W_in x + b_in + r * (W_hn h + b_hn))
//   h' = z * h + (1 - z) * n
// The backward direction processes the reversed sequence and re-reverses its
// output.
std::vector<numerics::Var> gru_layer_forward(numerics::Tape& tape, const GruWeights& weights,
                                             const std::vector<numerics::Var>& inputs,
                                             Direction direction);

// Checkpoint weights mounted on a tape. `trainable` leaves receive gradient.
struct BoundModel {
  const ModelConfig* config = nullptr;
  std::vector<std::pair<std::string, numerics::Var>> params;  // checkpoint order
  numerics::Var find(const std::string& name) const;
};

BoundModel bind_model(numerics::Tape& tape, const Checkpoint& ckpt, bool trainable);

// Inverted dropout: zeroes with probability `rate` and scales survivors by
// 1/(1-rate), so inference needs no rescaling. The mask enters the tape as a
// constant factor.
numerics::Var apply_dropout(numerics::Tape& tape, numerics::Var x, double rate,
                            numerics::Rng& rng);

// Per layer: GRU (directions concatenated per frame if bidirectional),
// dropout, linear projection, dropout; then a final linear map to V+1 logits.
// Dropout uses inverted scaling and only fires in train mode, where `rng`
// must be non-null. Inference is deterministic.
numerics::Var model_forward(numerics::Tape& tape, const BoundModel& model,
                            const FeatureSequence& features, bool train_mode,
                            numerics::Rng* rng = nullptr);

// Inference convenience: constants-only tape, returns the logits [T x (V+1)].
numerics::Tensor model_logits(const Checkpoint& ckpt, const FeatureSequence& features);

}  // namespace alignts::model
