// src/model/features.cc

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

#include "alignts/model/features.hpp"

#include "alignts/common/error.hpp"

namespace alignts::model {

const std::vector<StackOrdering>& stack_orderings() {
  static const std::vector<StackOrdering> orderings = {
      StackOrdering{0, 1, 2}, StackOrdering{1, 2, 0}, StackOrdering{2, 0, 1}};
  return orderings;
}

numerics::Tensor stack_frames(const numerics::Tensor& base_frames, const StackOrdering& ordering) {
  ALIGNTS_CHECK(base_frames.rank() == 2 && base_frames.rows() >= 1,
                "stack_frames: expected a non-empty [N x d] tensor, got ", base_frames.shape_str());
  {
    bool seen[3] = {false, false, false};
    for (int o : ordering) {
      ALIGNTS_CHECK(o >= 0 && o < 3 && !seen[o], "stack_frames: ordering must be a permutation of {0,1,2}");
      seen[o] = true;
    }
  }
  const int64_t n = base_frames.rows();
  const int64_t d = base_frames.cols();
  const int64_t t_out = (n + 2) / 3;
  numerics::Tensor out({t_out, 3 * d});
  for (int64_t t = 0; t < t_out; ++t) {
    for (int slot = 0; slot < 3; ++slot) {
      int64_t src = 3 * t + ordering[static_cast<size_t>(slot)];
      if (src >= n) src = n - 1;  // pad by repeating the final frame
      auto row = base_frames.row_span(src);
      for (int64_t j = 0; j < d; ++j) {
        out.at(t, slot * d + j) = row[static_cast<size_t>(j)];
      }
    }
  }
  return out;
}

std::vector<double> frame_energies(const numerics::Tensor& stacked) {
  std::vector<double> energies(static_cast<size_t>(stacked.rows()));
  for (int64_t t = 0; t < stacked.rows(); ++t) {
    double sum = 0.0;
    for (double v : stacked.row_span(t)) sum += v;
    energies[static_cast<size_t>(t)] = sum / static_cast<double>(stacked.cols());
  }
  return energies;
}

FeatureSequence make_feature_sequence(const numerics::Tensor& base_frames,
                                      const StackOrdering& ordering) {
  FeatureSequence fs;
  fs.frames = stack_frames(base_frames, ordering);
  fs.energies = frame_energies(fs.frames);
  return fs;
}

}  // namespace alignts::model
