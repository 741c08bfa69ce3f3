// src/numerics/math.cc

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

#include "alignts/numerics/math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "alignts/common/error.hpp"

namespace alignts::numerics {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double log_sum_exp(std::span<const double> values) {
  ALIGNTS_CHECK(!values.empty(), "log_sum_exp: empty input");
  double m = kNegInf;
  for (double v : values) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : values) s += std::exp(v - m);
  return m + std::log(s);
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

Tensor softmax_rows(const Tensor& logits) {
  ALIGNTS_CHECK(logits.rank() == 2, "softmax_rows: expected rank-2, got ", logits.shape_str());
  Tensor out(logits.shape);
  const int64_t rows = logits.rows(), cols = logits.cols();
  for (int64_t r = 0; r < rows; ++r) {
    auto in = logits.row_span(r);
    for (double v : in) {
      ALIGNTS_CHECK(std::isfinite(v), "softmax_rows: non-finite value in row ", r);
    }
    double m = *std::max_element(in.begin(), in.end());
    auto o = out.row_span(r);
    double sum = 0.0;
    for (int64_t c = 0; c < cols; ++c) {
      o[static_cast<size_t>(c)] = std::exp(in[static_cast<size_t>(c)] - m);
      sum += o[static_cast<size_t>(c)];
    }
    for (int64_t c = 0; c < cols; ++c) o[static_cast<size_t>(c)] /= sum;
  }
  return out;
}

Tensor log_softmax_rows(const Tensor& logits) {
  ALIGNTS_CHECK(logits.rank() == 2, "log_softmax_rows: expected rank-2, got ", logits.shape_str());
  Tensor out(logits.shape);
  const int64_t rows = logits.rows(), cols = logits.cols();
  for (int64_t r = 0; r < rows; ++r) {
    auto in = logits.row_span(r);
    for (double v : in) {
      ALIGNTS_CHECK(std::isfinite(v), "log_softmax_rows: non-finite value in row ", r);
    }
    double lse = log_sum_exp(in);
    auto o = out.row_span(r);
    for (int64_t c = 0; c < cols; ++c) o[static_cast<size_t>(c)] = in[static_cast<size_t>(c)] - lse;
  }
  return out;
}

}  // namespace alignts::numerics
