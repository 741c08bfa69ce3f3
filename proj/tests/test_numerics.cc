// tests/test_numerics.cc

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

#include "alignts/common/error.hpp"
#include "alignts/numerics/adam.hpp"
#include "alignts/numerics/gradcheck.hpp"
#include "alignts/numerics/math.hpp"
#include "alignts/numerics/rng.hpp"
#include "alignts/numerics/tape.hpp"
#include "alignts/numerics/tensor.hpp"
#include "testing/oracles.hpp"

using namespace alignts;
using numerics::Rng;
using numerics::Tape;
using numerics::Tensor;
using numerics::Var;

TEST_CASE("tensor shape/value consistency") {
  Tensor t({2, 3});
  CHECK(t.size() == 6);
  CHECK(t.rows() == 2);
  CHECK(t.cols() == 3);
  CHECK_THROWS_AS(Tensor({2, 2}, {1.0, 2.0}), Error);
  t.at(1, 2) = 5.0;
  CHECK(t.values[5] == 5.0);
  CHECK_FALSE(t.has_grad());
  t.alloc_grad();
  CHECK(t.has_grad());
  CHECK(t.grad.size() == 6);
}

TEST_CASE("log_sum_exp basics") {
  CHECK(numerics::log_sum_exp(std::vector<double>{3.25}) == 3.25);
  CHECK(numerics::log_sum_exp(std::vector<double>{0.0, 0.0}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(numerics::log_sum_exp(std::vector<double>{-1e9, 0.0}) == doctest::Approx(0.0));
  CHECK(std::isfinite(numerics::log_sum_exp(std::vector<double>{1e303, 1e303})));
  CHECK_THROWS_AS(numerics::log_sum_exp(std::vector<double>{}), Error);
}

TEST_CASE("softmax_rows: symmetry, stability, oracle") {
  Tensor z({1, 2}, {0.0, 0.0});
  Tensor s = numerics::softmax_rows(z);
  CHECK(s.at(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s.at(0, 1) == doctest::Approx(0.5).epsilon(1e-15));

  Tensor big({1, 2}, {1000.0, 0.0});
  Tensor sb = numerics::softmax_rows(big);
  CHECK(sb.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sb.at(0, 1) == doctest::Approx(0.0));
  CHECK(std::isfinite(sb.at(0, 0)));

  Rng rng(7);
  Tensor logits({5, 7});
  for (double& v : logits.values) v = rng.uniform(-4.0, 4.0);
  Tensor sm = numerics::softmax_rows(logits);
  for (int64_t r = 0; r < 5; ++r) {
    std::vector<double> row(logits.row_span(r).begin(), logits.row_span(r).end());
    std::vector<double> expected = testing::naive_softmax(row);
    double sum = 0.0;
    for (int64_t c = 0; c < 7; ++c) {
      CHECK(sm.at(r, c) == doctest::Approx(expected[static_cast<size_t>(c)]).epsilon(1e-12));
      sum += sm.at(r, c);
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }

  // Shift invariance per row.
  Tensor shifted = logits;
  for (int64_t c = 0; c < 7; ++c) shifted.at(2, c) += 123.0;
  Tensor sm2 = numerics::softmax_rows(shifted);
  for (int64_t c = 0; c < 7; ++c) CHECK(std::abs(sm2.at(2, c) - sm.at(2, c)) < 1e-12);

  Tensor bad({1, 2}, {std::nan(""), 0.0});
  CHECK_THROWS_WITH_AS(numerics::softmax_rows(bad),
                       doctest::Contains("row 0"), Error);
}

TEST_CASE("rng determinism and ranges") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
  Rng c(43);
  double mean = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double u = c.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    mean += u;
  }
  CHECK(mean / 10000.0 == doctest::Approx(0.5).epsilon(0.05));
  for (int i = 0; i < 1000; ++i) {
    int64_t v = c.uniform_int(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
  CHECK(numerics::derive_seed(1, "a") != numerics::derive_seed(1, "b"));
  CHECK(numerics::derive_seed(1, "a", 0) != numerics::derive_seed(1, "a", 1));
  CHECK(numerics::derive_seed(1, "a", 5) == numerics::derive_seed(1, "a", 5));
}

TEST_CASE("adam: zero gradient is the identity") {
  Tensor params({3}, {1.0, -2.0, 0.5});
  params.alloc_grad();
  auto state = numerics::AdamState::for_params(params, 0.1);
  numerics::adam_step(params, state);
  CHECK(state.step == 1);
  CHECK(params.values[0] == 1.0);
  CHECK(params.values[1] == -2.0);
  CHECK(params.values[2] == 0.5);
}

TEST_CASE("adam: first step moves by ~lr against the gradient sign") {
  Tensor params({2}, {0.0, 0.0});
  params.alloc_grad();
  params.grad[0] = 3.7;
  params.grad[1] = -0.004;
  auto state = numerics::AdamState::for_params(params, 0.05);
  numerics::adam_step(params, state);
  CHECK(params.values[0] == doctest::Approx(-0.05).epsilon(1e-4));
  CHECK(params.values[1] == doctest::Approx(0.05).epsilon(1e-2));
  CHECK(params.grad[0] == 0.0);  // grad zeroed after the step
}

TEST_CASE("adam: descends x^2") {
  Tensor params({1}, {1.0});
  params.alloc_grad();
  auto state = numerics::AdamState::for_params(params, 0.05);
  double prev = std::abs(params.values[0]);
  for (int i = 0; i < 10; ++i) {
    params.grad[0] = 2.0 * params.values[0];
    numerics::adam_step(params, state);
    CHECK(std::abs(params.values[0]) < prev);
    prev = std::abs(params.values[0]);
  }
  CHECK(state.step == 10);
}

TEST_CASE("adam: size mismatch errors") {
  Tensor params({3}, {1.0, 2.0, 3.0});
  params.alloc_grad();
  Tensor other({2}, {0.0, 0.0});
  auto state = numerics::AdamState::for_params(other, 0.1);
  CHECK_THROWS_AS(numerics::adam_step(params, state), Error);
}

TEST_CASE("gradient_check: exact for a quadratic") {
  numerics::LossFn fn = [](std::span<const double> x, std::vector<double>* grad) {
    double loss = 0.0;
    if (grad) grad->assign(x.size(), 0.0);
    for (size_t i = 0; i < x.size(); ++i) {
      loss += x[i] * x[i];
      if (grad) (*grad)[i] = 2.0 * x[i];
    }
    return loss;
  };
  std::vector<double> params = {0.3, -1.2, 2.0, 0.0, 5.5};
  Rng rng(1);
  CHECK(numerics::gradient_check(fn, params, 20, 1e-5, rng) < 1e-8);
}

TEST_CASE("tape: elementwise ops and broadcast backward") {
  Tape tape;
  Var x = tape.leaf(Tensor({3}, {0.5, -1.0, 2.0}), true);
  Var y = tape.sum_all(tape.mul(x, x));
  CHECK(tape.value(y).values[0] == doctest::Approx(0.25 + 1.0 + 4.0));
  tape.backward(y);
  auto g = tape.grad(x);
  CHECK(g[0] == doctest::Approx(1.0));
  CHECK(g[1] == doctest::Approx(-2.0));
  CHECK(g[2] == doctest::Approx(4.0));
}

TEST_CASE("tape: matvec/sigmoid/tanh/slice/concat gradients pass FD") {
  Rng seed_rng(11);
  const int m = 4, n = 3;
  std::vector<double> init(static_cast<size_t>(m * n + n), 0.0);
  for (double& v : init) v = seed_rng.uniform(-1.0, 1.0);

  numerics::LossFn fn = [&](std::span<const double> p, std::vector<double>* grad) {
    Tape tape;
    Var w = tape.leaf(Tensor({m, n}, {p.begin(), p.begin() + m * n}), true);
    Var x = tape.leaf(Tensor({n}, {p.begin() + m * n, p.end()}), true);
    Var h = tape.tanh_op(tape.matvec(w, x));
    Var s = tape.sigmoid(tape.slice(h, 1, 2));
    Var c = tape.concat(s, x);
    Var loss = tape.mean_all(tape.mul(c, c));
    double value = tape.value(loss).values[0];
    if (grad) {
      tape.backward(loss);
      grad->clear();
      auto gw = tape.grad(w);
      auto gx = tape.grad(x);
      grad->insert(grad->end(), gw.begin(), gw.end());
      grad->insert(grad->end(), gx.begin(), gx.end());
    }
    return value;
  };
  Rng rng(5);
  CHECK(numerics::gradient_check(fn, init, 30, 1e-6, rng) < 1e-7);
}

TEST_CASE("tape: log_softmax and exp gradients pass FD") {
  Rng seed_rng(13);
  std::vector<double> init(12);
  for (double& v : init) v = seed_rng.uniform(-2.0, 2.0);

  numerics::LossFn fn = [&](std::span<const double> p, std::vector<double>* grad) {
    Tape tape;
    Var logits = tape.leaf(Tensor({3, 4}, {p.begin(), p.end()}), true);
    Var lsm = tape.log_softmax_rows_op(logits);
    Var probs = tape.exp_op(lsm);
    // Weighted sums so the gradient is not uniform.
    Tensor wa({3, 4});
    Tensor wb({3, 4});
    for (int i = 0; i < 12; ++i) {
      wa.values[static_cast<size_t>(i)] = 0.1 * i - 0.4;
      wb.values[static_cast<size_t>(i)] = 0.05 * i * i - 0.3;
    }
    Var loss = tape.sum_all(
        tape.add(tape.mul(lsm, tape.constant(wa)), tape.mul(probs, tape.constant(wb))));
    double value = tape.value(loss).values[0];
    if (grad) {
      tape.backward(loss);
      auto g = tape.grad(logits);
      grad->assign(g.begin(), g.end());
    }
    return value;
  };
  Rng rng(17);
  CHECK(numerics::gradient_check(fn, init, 40, 1e-6, rng) < 1e-7);
}

TEST_CASE("tape: multi-seed backward accumulates additively") {
  Tape tape;
  Var x = tape.leaf(Tensor({2}, {1.0, 2.0}), true);
  Var a = tape.affine(x, 2.0, 0.0);  // 2x
  Var b = tape.mul(x, x);            // x^2
  std::vector<double> ga = {1.0, 0.0};
  std::vector<double> gb = {0.0, 1.0};
  std::vector<Tape::Seed> seeds = {{a, ga}, {b, gb}};
  tape.backward(seeds);
  auto g = tape.grad(x);
  CHECK(g[0] == doctest::Approx(2.0));  // d(2x_0)/dx_0
  CHECK(g[1] == doctest::Approx(4.0));  // d(x_1^2)/dx_1
}

TEST_CASE("tape: constants cut the backward sweep") {
  Tape tape;
  Var x = tape.constant(Tensor({2}, {1.0, 2.0}));
  Var y = tape.sum_all(tape.mul(x, x));
  tape.backward(y);
  CHECK(tape.grad(x).empty());
}
