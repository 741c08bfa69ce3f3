// include/alignts/numerics/gradcheck.hpp

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

#include <functional>
#include <span>
#include <vector>

#include "alignts/numerics/rng.hpp"

namespace alignts::numerics {

// Deterministic scalar loss over a flat parameter vector. When grad_out is
// non-null the callee must fill it with the analytic (backward-pass) gradient.
using LossFn = std::function<double(std::span<const double> params, std::vector<double>* grad_out)>;

// Compares the analytic gradient at `params` against central finite
// differences (f(x+h) - f(x-h)) / 2h on `probe_count` randomly sampled
// coordinates. Returns the maximum relative error, with denominator
// max(|analytic|, |fd|, 1e-8). Errors on a non-finite loss.
double gradient_check(const LossFn& loss_fn, std::span<const double> params, int probe_count,
                      double h, Rng& rng);

}  // namespace alignts::numerics
