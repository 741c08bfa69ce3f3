// src/model/network.cc

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

#include "alignts/model/network.hpp"

#include <algorithm>

#include "alignts/common/error.hpp"

namespace alignts::model {

using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

std::vector<Var> gru_layer_forward(Tape& tape, const GruWeights& weights,
                                   const std::vector<Var>& inputs, Direction direction) {
  ALIGNTS_CHECK(!inputs.empty(), "gru_layer_forward: empty input sequence");
  const Tensor& w_ih = tape.value(weights.w_ih);
  const Tensor& w_hh = tape.value(weights.w_hh);
  ALIGNTS_CHECK(w_ih.rank() == 2 && w_hh.rank() == 2, "gru_layer_forward: weights must be rank-2");
  ALIGNTS_CHECK(w_hh.rows() % 3 == 0 && w_hh.rows() == w_ih.rows(),
                "gru_layer_forward: gate rows mismatch ", w_ih.shape_str(), " vs ", w_hh.shape_str());
  const int64_t h = w_hh.cols();
  ALIGNTS_CHECK(w_hh.rows() == 3 * h, "gru_layer_forward: w_hh must be [3H x H], got ",
                w_hh.shape_str());
  const int64_t d_in = w_ih.cols();
  ALIGNTS_CHECK(tape.value(weights.b_ih).size() == 3 * h && tape.value(weights.b_hh).size() == 3 * h,
                "gru_layer_forward: bias shape mismatch");
  for (Var x : inputs) {
    ALIGNTS_CHECK(tape.value(x).rank() == 1 && tape.value(x).size() == d_in,
                  "gru_layer_forward: input dim ", tape.value(x).shape_str(),
                  " does not match weights for d_in=", d_in);
  }

  const size_t t_len = inputs.size();
  std::vector<Var> outputs(t_len);
  Var h_prev = tape.constant(Tensor({h}));
  for (size_t step = 0; step < t_len; ++step) {
    const size_t t = direction == Direction::kForward ? step : t_len - 1 - step;
    Var gi = tape.add(tape.matvec(weights.w_ih, inputs[t]), weights.b_ih);
    Var gh = tape.add(tape.matvec(weights.w_hh, h_prev), weights.b_hh);
    Var r = tape.sigmoid(tape.add(tape.slice(gi, 0, h), tape.slice(gh, 0, h)));
    Var z = tape.sigmoid(tape.add(tape.slice(gi, h, h), tape.slice(gh, h, h)));
    Var n = tape.tanh_op(tape.add(tape.slice(gi, 2 * h, h), tape.mul(r, tape.slice(gh, 2 * h, h))));
    Var h_t = tape.add(tape.mul(z, h_prev), tape.mul(tape.affine(z, -1.0, 1.0), n));
    outputs[t] = h_t;
    h_prev = h_t;
  }
  return outputs;
}

Var BoundModel::find(const std::string& name) const {
  for (const auto& [n, v] : params) {
    if (n == name) return v;
  }
  raise("BoundModel: no weight named ", name);
}

BoundModel bind_model(Tape& tape, const Checkpoint& ckpt, bool trainable) {
  BoundModel m;
  m.config = &ckpt.config;
  m.params.reserve(ckpt.weights.size());
  for (const auto& [name, t] : ckpt.weights) {
    m.params.emplace_back(name, tape.leaf(t, trainable));
  }
  return m;
}

Var apply_dropout(Tape& tape, Var x, double rate, numerics::Rng& rng) {
  const int64_t n = tape.value(x).size();
  Tensor mask({n});
  const double keep = 1.0 - rate;
  for (double& v : mask.values) v = rng.uniform() < keep ? 1.0 / keep : 0.0;
  return tape.mul(x, tape.constant(std::move(mask)));
}

Var model_forward(Tape& tape, const BoundModel& model, const FeatureSequence& features,
                  bool train_mode, numerics::Rng* rng) {
  const ModelConfig& cfg = *model.config;
  ALIGNTS_CHECK(features.feature_dim() == cfg.input_dim, "model_forward: feature dim ",
                features.feature_dim(), " does not match config input_dim ", cfg.input_dim);
  ALIGNTS_CHECK(features.num_frames() >= 1, "model_forward: empty feature sequence");
  ALIGNTS_CHECK(!train_mode || rng != nullptr, "model_forward: train mode needs an rng");

  const int64_t t_len = features.num_frames();
  const bool use_dropout = train_mode && cfg.dropout > 0.0;

  std::vector<Var> x(static_cast<size_t>(t_len));
  for (int64_t t = 0; t < t_len; ++t) {
    Tensor frame({features.feature_dim()});
    auto src = features.frames.row_span(t);
    std::copy(src.begin(), src.end(), frame.values.begin());
    x[static_cast<size_t>(t)] = tape.constant(std::move(frame));
  }

  for (int layer = 0; layer < cfg.layers; ++layer) {
    const std::string idx = std::to_string(layer);
    GruWeights fwd{model.find("gru" + idx + ".fwd.w_ih"), model.find("gru" + idx + ".fwd.w_hh"),
                   model.find("gru" + idx + ".fwd.b_ih"), model.find("gru" + idx + ".fwd.b_hh")};
    std::vector<Var> h = gru_layer_forward(tape, fwd, x, Direction::kForward);
    if (cfg.bidirectional) {
      GruWeights bwd{model.find("gru" + idx + ".bwd.w_ih"), model.find("gru" + idx + ".bwd.w_hh"),
                     model.find("gru" + idx + ".bwd.b_ih"), model.find("gru" + idx + ".bwd.b_hh")};
      std::vector<Var> hb = gru_layer_forward(tape, bwd, x, Direction::kBackward);
      for (size_t t = 0; t < h.size(); ++t) h[t] = tape.concat(h[t], hb[t]);
    }
    Var proj_w = model.find("proj" + idx + ".w");
    Var proj_b = model.find("proj" + idx + ".b");
    for (size_t t = 0; t < h.size(); ++t) {
      Var v = h[t];
      if (use_dropout) v = apply_dropout(tape, v, cfg.dropout, *rng);
      v = tape.add(tape.matvec(proj_w, v), proj_b);
      if (use_dropout) v = apply_dropout(tape, v, cfg.dropout, *rng);
      x[t] = v;
    }
  }

  Var out_w = model.find("out.w");
  Var out_b = model.find("out.b");
  std::vector<Var> logits(static_cast<size_t>(t_len));
  for (size_t t = 0; t < x.size(); ++t) {
    logits[t] = tape.add(tape.matvec(out_w, x[t]), out_b);
  }
  return tape.stack_rows(logits);
}

Tensor model_logits(const Checkpoint& ckpt, const FeatureSequence& features) {
  Tape tape;
  BoundModel m = bind_model(tape, ckpt, /*trainable=*/false);
  Var logits = model_forward(tape, m, features, /*train_mode=*/false);
  return tape.value(logits);
}

}  // namespace alignts::model
