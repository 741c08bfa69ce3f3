// src/numerics/gradcheck.cc

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

#include "alignts/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "alignts/common/error.hpp"

namespace alignts::numerics {

double gradient_check(const LossFn& loss_fn, std::span<const double> params, int probe_count,
                      double h, Rng& rng) {
  ALIGNTS_CHECK(h > 0.0, "gradient_check: h must be positive, got ", h);
  ALIGNTS_CHECK(!params.empty(), "gradient_check: empty parameter vector");
  ALIGNTS_CHECK(probe_count > 0, "gradient_check: probe_count must be positive");

  std::vector<double> x(params.begin(), params.end());
  std::vector<double> analytic;
  double base = loss_fn(x, &analytic);
  ALIGNTS_CHECK(std::isfinite(base), "gradient_check: non-finite loss ", base);
  ALIGNTS_CHECK(analytic.size() == x.size(), "gradient_check: gradient size ", analytic.size(),
                " does not match parameter count ", x.size());

  double max_rel = 0.0;
  for (int p = 0; p < probe_count; ++p) {
    const size_t k = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(x.size()) - 1));
    const double saved = x[k];
    x[k] = saved + h;
    double fp = loss_fn(x, nullptr);
    x[k] = saved - h;
    double fm = loss_fn(x, nullptr);
    x[k] = saved;
    ALIGNTS_CHECK(std::isfinite(fp) && std::isfinite(fm),
                  "gradient_check: non-finite probe at coordinate ", k);
    const double fd = (fp - fm) / (2.0 * h);
    const double a = analytic[k];
    const double denom = std::max({std::abs(a), std::abs(fd), 1e-8});
    max_rel = std::max(max_rel, std::abs(a - fd) / denom);
  }
  return max_rel;
}

}  // namespace alignts::numerics
