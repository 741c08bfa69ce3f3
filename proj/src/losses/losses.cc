// src/losses/losses.cc

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

#include "alignts/losses/losses.hpp"

#include <cmath>
#include <limits>

namespace alignts::losses {

using numerics::Tensor;

SilenceMask silence_mask(const model::FeatureSequence& features) {
  const size_t t_len = features.energies.size();
  ALIGNTS_CHECK(t_len >= 1, "silence_mask: empty utterance");
  double mean = 0.0;
  for (double e : features.energies) {
    ALIGNTS_CHECK(std::isfinite(e), "silence_mask: non-finite energy");
    mean += e;
  }
  mean /= static_cast<double>(t_len);
  SilenceMask mask;
  mask.is_silence.resize(t_len);
  for (size_t t = 0; t < t_len; ++t) {
    mask.is_silence[t] = features.energies[t] < mean;  // strict: ties are non-silence
  }
  return mask;
}

LossGrad alignment_penalty(const ctc::Posteriorgram& post, const SilenceMask& mask, double clamp) {
  ALIGNTS_CHECK(clamp > 0.0 && clamp < 1.0, "alignment_penalty: clamp ", clamp,
                " outside (0, 1)");
  const int64_t t_len = post.num_frames();
  ALIGNTS_CHECK(static_cast<size_t>(t_len) == mask.size(), "alignment_penalty: ", t_len,
                " frames vs mask of length ", mask.size());
  const int64_t k = post.num_symbols();
  const int blank = post.blank_id();
  LossGrad out;
  out.grad = Tensor(post.probs.shape);
  double sum = 0.0;
  for (int64_t t = 0; t < t_len; ++t) {
    // f = probability of the wrong behavior for this frame: total non-blank
    // mass on silence, blank mass on speech.
    double f_raw;
    if (mask.is_silence[static_cast<size_t>(t)]) {
      f_raw = 0.0;
      for (int64_t c = 0; c < k - 1; ++c) f_raw += post.probs.at(t, c);
    } else {
      f_raw = post.probs.at(t, blank);
    }
    const double f = std::min(std::max(f_raw, clamp), 1.0);
    sum += std::log(f);
    if (f_raw > clamp && f_raw <= 1.0) {
      const double d = 1.0 / (f * static_cast<double>(t_len));
      if (mask.is_silence[static_cast<size_t>(t)]) {
        // f = sum of non-blank probabilities.
        for (int64_t c = 0; c < k - 1; ++c) out.grad.at(t, c) = d;
      } else {
        out.grad.at(t, blank) = d;
      }
    }
  }
  out.value = sum / static_cast<double>(t_len);
  return out;
}

LossGrad ts_frame_loss(const Tensor& student_logits, const Tensor& teacher_logits) {
  ALIGNTS_CHECK(student_logits.same_shape(teacher_logits), "ts_frame_loss: student ",
                student_logits.shape_str(), " vs teacher ", teacher_logits.shape_str());
  ALIGNTS_CHECK(student_logits.rank() == 2, "ts_frame_loss: expected [T x (V+1)]");
  const int64_t t_len = student_logits.rows();
  LossGrad out;
  out.grad = Tensor(student_logits.shape);
  double sum = 0.0;
  for (size_t i = 0; i < student_logits.values.size(); ++i) {
    const double diff = student_logits.values[i] - teacher_logits.values[i];
    sum += diff * diff;
    out.grad.values[i] = 2.0 * diff / static_cast<double>(t_len);
  }
  out.value = sum / static_cast<double>(t_len);
  return out;
}

LossGrad ts_window_loss(const Tensor& student_logits, const Tensor& teacher_logits,
                        const WindowSpec& window) {
  ALIGNTS_CHECK(window.lo <= window.hi, "ts_window_loss: window lo ", window.lo, " > hi ",
                window.hi);
  ALIGNTS_CHECK(student_logits.same_shape(teacher_logits), "ts_window_loss: student ",
                student_logits.shape_str(), " vs teacher ", teacher_logits.shape_str());
  ALIGNTS_CHECK(student_logits.rank() == 2, "ts_window_loss: expected [T x (V+1)]");
  const int64_t t_len = student_logits.rows();
  const int64_t k = student_logits.cols();
  LossGrad out;
  out.grad = Tensor(student_logits.shape);
  double total = 0.0;
  for (int64_t i = 0; i < t_len; ++i) {
    const int64_t j_lo = std::max<int64_t>(0, i + window.lo);
    const int64_t j_hi = std::min<int64_t>(t_len - 1, i + window.hi);
    if (j_lo > j_hi) continue;  // empty clipped window contributes 0
    auto sq_dist = [&](int64_t j) {
      double d2 = 0.0;
      for (int64_t c = 0; c < k; ++c) {
        const double diff = student_logits.at(i, c) - teacher_logits.at(j, c);
        d2 += diff * diff;
      }
      return d2;
    };
    if (window.mode == WindowSpec::Mode::kBest) {
      int64_t best_j = j_lo;
      double best = sq_dist(j_lo);
      for (int64_t j = j_lo + 1; j <= j_hi; ++j) {
        const double d2 = sq_dist(j);
        if (d2 < best) {
          best = d2;
          best_j = j;
        }
      }
      total += best;
      for (int64_t c = 0; c < k; ++c) {
        out.grad.at(i, c) +=
            2.0 * (student_logits.at(i, c) - teacher_logits.at(best_j, c)) / static_cast<double>(t_len);
      }
    } else {
      const double width = static_cast<double>(j_hi - j_lo + 1);
      double acc = 0.0;
      for (int64_t j = j_lo; j <= j_hi; ++j) acc += sq_dist(j);
      total += acc / width;
      for (int64_t c = 0; c < k; ++c) {
        double g = 0.0;
        for (int64_t j = j_lo; j <= j_hi; ++j) {
          g += 2.0 * (student_logits.at(i, c) - teacher_logits.at(j, c));
        }
        out.grad.at(i, c) += g / (width * static_cast<double>(t_len));
      }
    }
  }
  out.value = total / static_cast<double>(t_len);
  return out;
}

LossConfig parse_recipe(const std::string& recipe) {
  LossConfig c;
  c.recipe = recipe;
  if (recipe == "ctc") {
    return c;
  }
  if (recipe == "align") {
    c.use_align = true;
    return c;
  }
  if (recipe == "ts") {
    c.ts = LossConfig::TsTerm{};
    return c;
  }
  if (recipe == "ts+align") {
    c.use_align = true;
    c.ts = LossConfig::TsTerm{};
    return c;
  }
  const bool best = recipe.rfind("ts-best:", 0) == 0;
  const bool avg = recipe.rfind("ts-avg:", 0) == 0;
  if (best || avg) {
    const std::string num = recipe.substr(best ? 8 : 7);
    ALIGNTS_CHECK(!num.empty() && (num[0] == '+' || num[0] == '-'),
                  "loss recipe '", recipe, "': window must be signed, e.g. ts-avg:-6");
    int n = 0;
    try {
      n = std::stoi(num);
    } catch (const std::exception&) {
      raise("loss recipe '", recipe, "': cannot parse window '", num, "'");
    }
    WindowSpec w;
    w.mode = best ? WindowSpec::Mode::kBest : WindowSpec::Mode::kAvg;
    w.lo = std::min(n, 0);
    w.hi = std::max(n, 0);
    c.ts = LossConfig::TsTerm{w};
    return c;
  }
  raise("unknown loss recipe '", recipe,
        "' (expected ctc | align | ts | ts+align | ts-best:±N | ts-avg:±N)");
}

double ComposedLoss::term(const std::string& name) const {
  for (const auto& [n, v] : terms) {
    if (n == name) return v;
  }
  raise("ComposedLoss: no term named ", name);
}

ComposedLoss compose_loss(const LossConfig& config, const LossContext& ctx) {
  ALIGNTS_CHECK(config.any_enabled(), "compose_loss: no loss term enabled");
  ComposedLoss out;
  if (config.use_ctc) {
    ALIGNTS_CHECK(ctx.log_probs != nullptr && ctx.labels != nullptr,
                  "compose_loss: CTC term needs log_probs and labels");
    ctc::CtcResult res = ctc::ctc_loss(*ctx.log_probs, *ctx.labels);
    out.terms.emplace_back("ctc", res.loss);
    out.total += config.weights.ctc * res.loss;
    for (double& g : res.grad.values) g *= config.weights.ctc;
    out.d_log_probs = std::move(res.grad);
  }
  if (config.use_align) {
    ALIGNTS_CHECK(ctx.posteriorgram != nullptr && ctx.features != nullptr,
                  "compose_loss: align term needs a posteriorgram and features");
    LossGrad res =
        alignment_penalty(*ctx.posteriorgram, silence_mask(*ctx.features), config.align_clamp);
    out.terms.emplace_back("align", res.value);
    out.total += config.weights.align * res.value;
    for (double& g : res.grad.values) g *= config.weights.align;
    out.d_probs = std::move(res.grad);
  }
  if (config.ts.has_value()) {
    ALIGNTS_CHECK(ctx.teacher_logits != nullptr,
                  "compose_loss: teacher-student term enabled but no teacher logits provided");
    ALIGNTS_CHECK(ctx.logits != nullptr, "compose_loss: teacher-student term needs student logits");
    LossGrad res = config.ts->window.has_value()
                       ? ts_window_loss(*ctx.logits, *ctx.teacher_logits, *config.ts->window)
                       : ts_frame_loss(*ctx.logits, *ctx.teacher_logits);
    out.terms.emplace_back("ts", res.value);
    out.total += config.weights.ts * res.value;
    for (double& g : res.grad.values) g *= config.weights.ts;
    out.d_logits = std::move(res.grad);
  }
  return out;
}

}  // namespace alignts::losses
