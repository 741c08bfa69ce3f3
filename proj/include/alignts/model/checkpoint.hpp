// include/alignts/model/checkpoint.hpp

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
#include <filesystem>
#include <string>

#include "alignts/io/tensor_io.hpp"
#include "alignts/numerics/tensor.hpp"

namespace alignts::model {

struct ModelConfig {
  int layers = 2;
  int hidden_per_direction = 64;
  int projection = 32;
  double dropout = 0.2;
  bool bidirectional = true;
  int input_dim = 120;
  int vocab_size = 39;  // V; the output dimension is V+1 with blank at index V

  int directions() const { return bidirectional ? 2 : 1; }
  int output_dim() const { return vocab_size + 1; }
  int blank_id() const { return vocab_size; }

  // Full-scale sizes: 4 layers, 512 units per direction, projection 100,
  // dropout 0.2. The student keeps the per-direction width and drops the
  // backward direction, halving the total unit count.
  static ModelConfig paper_teacher();
  static ModelConfig paper_student();
  // Small sizes for tests and trend experiments: 2 layers, 64 units,
  // projection 32.
  static ModelConfig desk(bool bidirectional, int input_dim, int vocab_size);

  bool operator==(const ModelConfig&) const = default;
};

// Named weights in a fixed order plus training provenance. Save/load
// round-trips reproduce forward outputs bit-exactly (raw little-endian
// doubles).
struct Checkpoint {
  static constexpr uint32_t kFormatVersion = 1;

  ModelConfig config;
  io::NamedTensors weights;
  struct Metadata {
    std::string recipe;   // loss recipe the model was trained with
    uint64_t seed = 0;
    int epoch = 0;
  } metadata;

  numerics::Tensor* find(const std::string& name);
  const numerics::Tensor* find(const std::string& name) const;
  int64_t parameter_count() const;
};

// Seeded uniform init in +/- sqrt(1 / fan_in) per weight matrix; biases zero.
Checkpoint init_checkpoint(const ModelConfig& config, uint64_t seed);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
// Rejects unknown format versions.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace alignts::model
