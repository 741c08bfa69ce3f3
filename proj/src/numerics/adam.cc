// src/numerics/adam.cc

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

#include "alignts/numerics/adam.hpp"

#include <cmath>

#include "alignts/common/error.hpp"

namespace alignts::numerics {

AdamState AdamState::for_params(const Tensor& params, double lr_in) {
  AdamState s;
  s.m.assign(params.values.size(), 0.0);
  s.v.assign(params.values.size(), 0.0);
  s.lr = lr_in;
  return s;
}

void adam_step(Tensor& params, AdamState& state) {
  ALIGNTS_CHECK(params.has_grad(), "adam_step: params have no grad buffer");
  const size_t n = params.values.size();
  ALIGNTS_CHECK(state.m.size() == n && state.v.size() == n, "adam_step: state sized for ",
                state.m.size(), " params, got ", n);
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (size_t i = 0; i < n; ++i) {
    const double g = params.grad[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params.values[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
  params.zero_grad();
}

}  // namespace alignts::numerics
