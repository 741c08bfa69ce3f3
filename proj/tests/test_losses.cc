// tests/test_losses.cc

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

#include <cmath>

#include <doctest.h>

#include "alignts/losses/losses.hpp"
#include "alignts/numerics/gradcheck.hpp"
#include "alignts/numerics/math.hpp"
#include "testing/oracles.hpp"

using namespace alignts;
using ctc::PhonemeSeq;
using ctc::Posteriorgram;
using losses::LossConfig;
using losses::WindowSpec;
using model::FeatureSequence;
using numerics::Rng;
using numerics::Tensor;

namespace {

FeatureSequence features_with_energies(std::vector<double> energies) {
  FeatureSequence fs;
  const int64_t t_len = static_cast<int64_t>(energies.size());
  fs.frames = Tensor({t_len, 1});
  for (int64_t t = 0; t < t_len; ++t) fs.frames.at(t, 0) = energies[static_cast<size_t>(t)];
  fs.energies = std::move(energies);
  return fs;
}

Tensor random_logits(Rng& rng, int64_t t_len, int64_t k, double scale = 2.0) {
  Tensor logits({t_len, k});
  for (double& v : logits.values) v = rng.uniform(-scale, scale);
  return logits;
}

}  // namespace

TEST_CASE("silence_mask: strict comparison against the mean") {
  losses::SilenceMask mask = losses::silence_mask(features_with_energies({1.0, 3.0}));
  CHECK(mask.is_silence == std::vector<bool>{true, false});

  // Constant energies tie with the mean; ties are non-silence.
  losses::SilenceMask flat = losses::silence_mask(features_with_energies({2.0, 2.0, 2.0}));
  CHECK(flat.is_silence == std::vector<bool>{false, false, false});
}

TEST_CASE("silence_mask: invariant under positive energy scaling") {
  Rng rng(404);
  for (int trial = 0; trial < 200; ++trial) {
    const int64_t t_len = rng.uniform_int(1, 20);
    std::vector<double> energies(static_cast<size_t>(t_len));
    for (double& e : energies) e = rng.uniform(0.0, 3.0);
    const double scale = std::exp(rng.uniform(-6.0, 6.0));
    std::vector<double> scaled = energies;
    for (double& e : scaled) e *= scale;
    auto a = losses::silence_mask(features_with_energies(energies));
    auto b = losses::silence_mask(features_with_energies(scaled));
    CHECK(a.is_silence == b.is_silence);
  }
}

TEST_CASE("alignment_penalty: quoted arithmetic case") {
  // Silence frame with P(non-blank)=0.5 and speech frame with P(blank)=0.5.
  Tensor probs({2, 2}, {0.5, 0.5, 0.5, 0.5});
  Posteriorgram post = ctc::make_posteriorgram(probs);
  losses::SilenceMask mask;
  mask.is_silence = {true, false};
  auto res = losses::alignment_penalty(post, mask, 1e-8);
  CHECK(res.value == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("alignment_penalty: clamp floor on perfectly aligned outputs") {
  // Blank carries all mass on silence, none on speech: f = 0 everywhere.
  Tensor probs({2, 2}, {0.0, 1.0, 1.0, 0.0});
  Posteriorgram post = ctc::make_posteriorgram(probs);
  losses::SilenceMask mask;
  mask.is_silence = {true, false};
  auto res = losses::alignment_penalty(post, mask, 1e-8);
  CHECK(res.value == doctest::Approx(std::log(1e-8)).epsilon(1e-12));
  for (double g : res.grad.values) CHECK(g == 0.0);  // clamped region has zero slope
}

TEST_CASE("alignment_penalty: rejects bad clamps") {
  Tensor probs({1, 2}, {0.5, 0.5});
  Posteriorgram post = ctc::make_posteriorgram(probs);
  losses::SilenceMask mask;
  mask.is_silence = {true};
  CHECK_THROWS_AS(losses::alignment_penalty(post, mask, 0.0), Error);
  CHECK_THROWS_AS(losses::alignment_penalty(post, mask, 1.0), Error);
}

TEST_CASE("alignment_penalty: matches the per-frame formula oracle") {
  Rng rng(7);
  const int64_t t_len = 9, k = 5;
  Tensor probs = testing::random_posteriorgram(rng, t_len, k);
  Posteriorgram post = ctc::make_posteriorgram(probs);
  losses::SilenceMask mask;
  for (int64_t t = 0; t < t_len; ++t) mask.is_silence.push_back(t % 3 == 0);
  const double clamp = 1e-8;
  auto res = losses::alignment_penalty(post, mask, clamp);

  double expected = 0.0;
  for (int64_t t = 0; t < t_len; ++t) {
    const double blank = probs.at(t, k - 1);
    double f = mask.is_silence[static_cast<size_t>(t)] ? 1.0 - blank : blank;
    f = std::min(1.0, std::max(clamp, f));
    expected += std::log(f);
  }
  expected /= static_cast<double>(t_len);
  CHECK(res.value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("alignment_penalty: gradient passes finite differences") {
  Rng init_rng(11);
  const int64_t t_len = 6, k = 4;
  Tensor probs = testing::random_posteriorgram(init_rng, t_len, k);
  losses::SilenceMask mask;
  for (int64_t t = 0; t < t_len; ++t) mask.is_silence.push_back(t % 2 == 0);

  numerics::LossFn fn = [&](std::span<const double> p, std::vector<double>* grad) {
    Posteriorgram post;
    post.probs = Tensor({t_len, k}, {p.begin(), p.end()});
    auto res = losses::alignment_penalty(post, mask, 1e-8);
    if (grad) grad->assign(res.grad.values.begin(), res.grad.values.end());
    return res.value;
  };
  std::vector<double> init(probs.values.begin(), probs.values.end());
  Rng rng(13);
  CHECK(numerics::gradient_check(fn, init, 50, 1e-5, rng) < 1e-4);
}

TEST_CASE("alignment_penalty: monotone in the aligned direction") {
  // Moving blank mass up on a silence frame decreases the penalty; moving
  // non-blank mass up on a speech frame decreases it too.
  Tensor probs({2, 3}, {0.3, 0.3, 0.4, 0.3, 0.3, 0.4});
  losses::SilenceMask mask;
  mask.is_silence = {true, false};
  auto base = losses::alignment_penalty(ctc::make_posteriorgram(probs), mask, 1e-8);

  Tensor more_blank_on_silence = probs;
  more_blank_on_silence.at(0, 2) += 0.2;
  more_blank_on_silence.at(0, 0) -= 0.2;
  auto a = losses::alignment_penalty(ctc::make_posteriorgram(more_blank_on_silence), mask, 1e-8);
  CHECK(a.value < base.value);

  Tensor more_speech_on_speech = probs;
  more_speech_on_speech.at(1, 0) += 0.2;
  more_speech_on_speech.at(1, 2) -= 0.2;
  auto b = losses::alignment_penalty(ctc::make_posteriorgram(more_speech_on_speech), mask, 1e-8);
  CHECK(b.value < base.value);
}

TEST_CASE("ts_frame_loss: identity and arithmetic") {
  Tensor same({3, 2}, {1, 2, 3, 4, 5, 6});
  CHECK(losses::ts_frame_loss(same, same).value == 0.0);

  Tensor teacher({1, 2}, {1.0, 2.0});
  Tensor student({1, 2}, {0.0, 0.0});
  CHECK(losses::ts_frame_loss(student, teacher).value == doctest::Approx(5.0));

  Tensor short_one({2, 2}, {0, 0, 0, 0});
  CHECK_THROWS_AS(losses::ts_frame_loss(short_one, teacher), Error);
}

TEST_CASE("ts_frame_loss: matches a two-loop oracle and FD") {
  Rng rng(3);
  const int64_t t_len = 5, k = 4;
  Tensor teacher = random_logits(rng, t_len, k);
  Tensor student = random_logits(rng, t_len, k);
  auto res = losses::ts_frame_loss(student, teacher);
  double expected = 0.0;
  for (int64_t t = 0; t < t_len; ++t) {
    for (int64_t c = 0; c < k; ++c) {
      const double d = teacher.at(t, c) - student.at(t, c);
      expected += d * d;
    }
  }
  expected /= static_cast<double>(t_len);
  CHECK(res.value == doctest::Approx(expected).epsilon(1e-12));

  numerics::LossFn fn = [&](std::span<const double> p, std::vector<double>* grad) {
    Tensor s({t_len, k}, {p.begin(), p.end()});
    auto r = losses::ts_frame_loss(s, teacher);
    if (grad) grad->assign(r.grad.values.begin(), r.grad.values.end());
    return r.value;
  };
  std::vector<double> init(student.values.begin(), student.values.end());
  Rng probe(5);
  CHECK(numerics::gradient_check(fn, init, 40, 1e-5, probe) < 1e-4);
}

TEST_CASE("ts_window_loss: degenerate window equals the frame loss") {
  Rng rng(9);
  Tensor teacher = random_logits(rng, 6, 3);
  Tensor student = random_logits(rng, 6, 3);
  for (auto mode : {WindowSpec::Mode::kBest, WindowSpec::Mode::kAvg}) {
    WindowSpec w{0, 0, mode};
    auto windowed = losses::ts_window_loss(student, teacher, w);
    auto frame = losses::ts_frame_loss(student, teacher);
    CHECK(windowed.value == doctest::Approx(frame.value).epsilon(1e-15));
    for (size_t i = 0; i < frame.grad.values.size(); ++i) {
      CHECK(windowed.grad.values[i] == doctest::Approx(frame.grad.values[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("ts_window_loss: quoted hand example") {
  // T=2, one logit dim; teacher frames [0], [10]; student frame 1 is [1].
  Tensor teacher({2, 1}, {0.0, 10.0});
  Tensor student({2, 1}, {0.0, 1.0});
  WindowSpec w{-1, 0, WindowSpec::Mode::kBest};
  auto res = losses::ts_window_loss(student, teacher, w);
  // Frame 0 contributes min over {teacher[0]} = 0; frame 1 contributes
  // min((1-0)^2, (1-10)^2) = 1. Mean over frames: 0.5.
  CHECK(res.value == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("ts_window_loss: rejects inverted windows") {
  Tensor t({2, 1}, {0.0, 1.0});
  CHECK_THROWS_AS(losses::ts_window_loss(t, t, WindowSpec{1, -1, WindowSpec::Mode::kAvg}), Error);
}

TEST_CASE("ts_window_loss: matches the double-loop oracle in both modes") {
  Rng rng(15);
  const int64_t t_len = 8, k = 3;
  Tensor teacher = random_logits(rng, t_len, k);
  Tensor student = random_logits(rng, t_len, k);
  for (auto mode : {WindowSpec::Mode::kBest, WindowSpec::Mode::kAvg}) {
    WindowSpec w{-3, 0, mode};
    auto res = losses::ts_window_loss(student, teacher, w);
    double expected = 0.0;
    for (int64_t i = 0; i < t_len; ++i) {
      double best = 1e300, acc = 0.0;
      int width = 0;
      for (int j = w.lo; j <= w.hi; ++j) {
        const int64_t tj = i + j;
        if (tj < 0 || tj >= t_len) continue;
        double d2 = 0.0;
        for (int64_t c = 0; c < k; ++c) {
          const double diff = student.at(i, c) - teacher.at(tj, c);
          d2 += diff * diff;
        }
        best = std::min(best, d2);
        acc += d2;
        ++width;
      }
      expected += mode == WindowSpec::Mode::kBest ? best : acc / width;
    }
    expected /= static_cast<double>(t_len);
    CHECK(res.value == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("ts_window_loss: gradients pass FD in both modes") {
  Rng rng(21);
  const int64_t t_len = 6, k = 3;
  Tensor teacher = random_logits(rng, t_len, k);
  Tensor student = random_logits(rng, t_len, k);
  for (auto mode : {WindowSpec::Mode::kBest, WindowSpec::Mode::kAvg}) {
    WindowSpec w{-2, 1, mode};
    numerics::LossFn fn = [&](std::span<const double> p, std::vector<double>* grad) {
      Tensor s({t_len, k}, {p.begin(), p.end()});
      auto r = losses::ts_window_loss(s, teacher, w);
      if (grad) grad->assign(r.grad.values.begin(), r.grad.values.end());
      return r.value;
    };
    std::vector<double> init(student.values.begin(), student.values.end());
    Rng probe(mode == WindowSpec::Mode::kBest ? 31 : 32);
    // Random teacher frames are far apart, so the best-match index is stable
    // under the probe step and the min is differentiable at this point.
    CHECK(numerics::gradient_check(fn, init, 40, 1e-5, probe) < 1e-4);
  }
}

TEST_CASE("ts_window_loss: best <= avg for any window") {
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const int64_t t_len = rng.uniform_int(1, 10);
    const int64_t k = rng.uniform_int(1, 5);
    Tensor teacher = random_logits(rng, t_len, k);
    Tensor student = random_logits(rng, t_len, k);
    const int lo = static_cast<int>(rng.uniform_int(-4, 0));
    const int hi = static_cast<int>(rng.uniform_int(0, 4));
    auto best = losses::ts_window_loss(student, teacher, {lo, hi, WindowSpec::Mode::kBest});
    auto avg = losses::ts_window_loss(student, teacher, {lo, hi, WindowSpec::Mode::kAvg});
    CHECK(best.value <= avg.value + 1e-12);
  }
}

TEST_CASE("parse_recipe: named recipes and windows") {
  CHECK(losses::parse_recipe("ctc").use_ctc);
  CHECK_FALSE(losses::parse_recipe("ctc").use_align);
  CHECK(losses::parse_recipe("align").use_align);
  CHECK(losses::parse_recipe("ts").ts.has_value());
  CHECK_FALSE(losses::parse_recipe("ts").ts->window.has_value());
  LossConfig tsalign = losses::parse_recipe("ts+align");
  CHECK((tsalign.use_ctc && tsalign.use_align && tsalign.ts.has_value()));

  LossConfig past = losses::parse_recipe("ts-avg:-6");
  CHECK(past.ts->window == WindowSpec{-6, 0, WindowSpec::Mode::kAvg});
  LossConfig future = losses::parse_recipe("ts-best:+3");
  CHECK(future.ts->window == WindowSpec{0, 3, WindowSpec::Mode::kBest});

  CHECK_THROWS_AS(losses::parse_recipe("ts-avg:6"), Error);  // unsigned window
  CHECK_THROWS_AS(losses::parse_recipe("nonsense"), Error);
}

namespace {

struct ComposeFixture {
  int64_t t_len = 7, k = 4;
  Tensor logits, teacher, log_probs;
  Posteriorgram post;
  FeatureSequence feats;
  PhonemeSeq labels;

  explicit ComposeFixture(uint64_t seed) {
    Rng rng(seed);
    logits = random_logits(rng, t_len, k);
    teacher = random_logits(rng, t_len, k);
    log_probs = numerics::log_softmax_rows(logits);
    post.probs = numerics::softmax_rows(logits);
    std::vector<double> energies;
    for (int64_t t = 0; t < t_len; ++t) energies.push_back(rng.uniform(0.0, 2.0));
    feats = features_with_energies(std::move(energies));
    labels = PhonemeSeq({0, 2});
  }

  losses::LossContext ctx() const {
    losses::LossContext c;
    c.log_probs = &log_probs;
    c.posteriorgram = &post;
    c.logits = &logits;
    c.features = &feats;
    c.labels = &labels;
    c.teacher_logits = &teacher;
    return c;
  }
};

}  // namespace

TEST_CASE("compose_loss: ctc-only equals ctc_loss exactly") {
  ComposeFixture fx(51);
  auto composed = losses::compose_loss(losses::parse_recipe("ctc"), fx.ctx());
  auto direct = ctc::ctc_loss(fx.log_probs, fx.labels);
  CHECK(composed.total == direct.loss);
  CHECK(composed.term("ctc") == direct.loss);
}

TEST_CASE("compose_loss: ts+align with teacher == student reduces to align") {
  ComposeFixture fx(52);
  losses::LossContext ctx = fx.ctx();
  ctx.teacher_logits = ctx.logits;  // zero ts term
  auto full = losses::compose_loss(losses::parse_recipe("ts+align"), ctx);
  auto align_only = losses::compose_loss(losses::parse_recipe("align"), ctx);
  CHECK(full.term("ts") == 0.0);
  CHECK(full.total == align_only.total);
}

TEST_CASE("compose_loss: total is the exact sum of its terms (one ctc copy)") {
  for (uint64_t seed = 100; seed < 110; ++seed) {
    ComposeFixture fx(seed);
    auto composed = losses::compose_loss(losses::parse_recipe("ts+align"), fx.ctx());
    const double ctc_term = ctc::ctc_loss(fx.log_probs, fx.labels).loss;
    const double align_term =
        losses::alignment_penalty(fx.post, losses::silence_mask(fx.feats), 1e-8).value;
    const double ts_term = losses::ts_frame_loss(fx.logits, fx.teacher).value;
    const double resummed = composed.term("ctc") + composed.term("align") + composed.term("ts");
    CHECK(composed.total == resummed);
    CHECK(composed.term("ctc") == ctc_term);
    CHECK(composed.term("align") == align_term);
    CHECK(composed.term("ts") == ts_term);
    // Double-counting the CTC term would overshoot by a visible margin.
    CHECK(std::abs(composed.total - (2.0 * ctc_term + align_term + ts_term)) > 1e-6);
  }
}

TEST_CASE("compose_loss: weighted sums scale per term") {
  ComposeFixture fx(53);
  LossConfig cfg = losses::parse_recipe("ts+align");
  cfg.weights.ctc = 0.5;
  cfg.weights.align = 2.0;
  cfg.weights.ts = 3.0;
  auto composed = losses::compose_loss(cfg, fx.ctx());
  const double expected = 0.5 * composed.term("ctc") + 2.0 * composed.term("align") +
                          3.0 * composed.term("ts");
  CHECK(composed.total == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("compose_loss: missing teacher logits errors") {
  ComposeFixture fx(54);
  losses::LossContext ctx = fx.ctx();
  ctx.teacher_logits = nullptr;
  CHECK_THROWS_WITH_AS(losses::compose_loss(losses::parse_recipe("ts"), ctx),
                       doctest::Contains("teacher"), Error);
}

TEST_CASE("compose_loss: at least one term must be enabled") {
  ComposeFixture fx(55);
  LossConfig cfg;
  cfg.use_ctc = false;
  CHECK_THROWS_AS(losses::compose_loss(cfg, fx.ctx()), Error);
}
