// include/alignts/numerics/adam.hpp

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

#include <cstdint>
#include <vector>

#include "alignts/numerics/tensor.hpp"

namespace alignts::numerics {

// Per-parameter-tensor Adam state. beta1/beta2/eps are the optimizer's
// conventional defaults; lr comes from the training schedule.
struct AdamState {
  int64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState for_params(const Tensor& params, double lr);
};

// One Adam update with bias correction, reading params.grad. The grad buffer
// is zeroed afterwards. Errors if grad is missing or the state is mis-sized.
void adam_step(Tensor& params, AdamState& state);

}  // namespace alignts::numerics
