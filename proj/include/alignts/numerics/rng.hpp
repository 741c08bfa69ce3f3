// include/alignts/numerics/rng.hpp

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
#include <random>
#include <string_view>

namespace alignts::numerics {

// splitmix64 finalizer; used to derive independent substream seeds.
uint64_t mix64(uint64_t x);

// Stable seed for a named substream, e.g. derive_seed(seed, "utt:train", 17).
// The same (base, tag, index) always yields the same seed.
uint64_t derive_seed(uint64_t base, std::string_view tag, uint64_t index = 0);

// Deterministic RNG. All sampling goes through hand-rolled transforms of
// mt19937_64 output so streams do not depend on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (second value cached).
  double normal();
  double normal(double mean, double stddev);

  // Uniform integer in [lo, hi], inclusive, unbiased.
  int64_t uniform_int(int64_t lo, int64_t hi);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace alignts::numerics
