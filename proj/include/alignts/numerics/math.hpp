// include/alignts/numerics/math.hpp

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

#include <span>

#include "alignts/numerics/tensor.hpp"

namespace alignts::numerics {

// log(sum_i exp(v_i)), stable under large magnitudes. Errors on empty input.
double log_sum_exp(std::span<const double> values);

// Stable two-argument form; handles -inf operands.
double log_add(double a, double b);

// Row-wise softmax of a [T x K] tensor via max subtraction. Each output row is
// non-negative and sums to 1. Errors on non-finite input, naming the row.
Tensor softmax_rows(const Tensor& logits);

// Row-wise log-softmax of a [T x K] tensor.
Tensor log_softmax_rows(const Tensor& logits);

}  // namespace alignts::numerics
