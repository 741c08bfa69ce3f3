// include/alignts/model/features.hpp

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

#include <array>
#include <vector>

#include "alignts/numerics/tensor.hpp"

namespace alignts::model {

// Base frames are emitted at a 10 ms shift; three are concatenated into one
// stacked frame, so a stacked frame lasts 30 ms.
inline constexpr double kBaseFrameShiftMs = 10.0;
inline constexpr double kStackedFrameMs = 3.0 * kBaseFrameShiftMs;

// One utterance's model input: T stacked frames of dimension D, with the
// per-frame energy E_t (mean of all feature values in the stack).
struct FeatureSequence {
  numerics::Tensor frames;        // [T x D]
  std::vector<double> energies;   // length T
  double frame_duration_ms = kStackedFrameMs;

  int64_t num_frames() const { return frames.rows(); }
  int64_t feature_dim() const { return frames.cols(); }
};

using StackOrdering = std::array<int, 3>;

// The three orderings used for augmentation: cyclic rotations of (0,1,2).
const std::vector<StackOrdering>& stack_orderings();

// Concatenates three consecutive base frames into one stacked frame, in the
// given within-stack ordering. A base frame count not divisible by 3 is
// padded by repeating the final frame. Errors on empty input.
numerics::Tensor stack_frames(const numerics::Tensor& base_frames, const StackOrdering& ordering);

// Mean of all values in each stacked frame; identical for every stack
// ordering of the same base frames.
std::vector<double> frame_energies(const numerics::Tensor& stacked);

// Stacks with the given ordering and fills in energies.
FeatureSequence make_feature_sequence(const numerics::Tensor& base_frames,
                                      const StackOrdering& ordering = {0, 1, 2});

}  // namespace alignts::model
