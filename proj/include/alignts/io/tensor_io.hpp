// include/alignts/io/tensor_io.hpp

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
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "alignts/numerics/tensor.hpp"

namespace alignts::io {

// Named-tensor container, raw little-endian doubles. Layout:
//   magic "ATSB" | u32 version | u64 n_entries
//   per entry: u32 name_len | name | u32 rank | u64 dims[rank] | f64 data[]
// The same block is embedded in checkpoint files after their header.
inline constexpr uint32_t kTensorContainerVersion = 1;

using NamedTensors = std::vector<std::pair<std::string, numerics::Tensor>>;

void write_tensor_block(std::ostream& os, const NamedTensors& tensors);
NamedTensors read_tensor_block(std::istream& is);

void save_tensors(const std::filesystem::path& path, const NamedTensors& tensors);
NamedTensors load_tensors(const std::filesystem::path& path);

// nullptr if absent.
const numerics::Tensor* find_tensor(const NamedTensors& tensors, const std::string& name);

// Raw helpers used by the container and the checkpoint header.
void write_u32(std::ostream& os, uint32_t v);
void write_u64(std::ostream& os, uint64_t v);
uint32_t read_u32(std::istream& is);
uint64_t read_u64(std::istream& is);
void write_bytes(std::ostream& os, const std::string& s);
std::string read_bytes(std::istream& is, size_t n);

}  // namespace alignts::io
