// src/io/tensor_io.cc

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

#include "alignts/io/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "alignts/common/error.hpp"

namespace alignts::io {

static_assert(std::endian::native == std::endian::little,
              "tensor container assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'A', 'T', 'S', 'B'};
constexpr uint64_t kMaxEntries = 1u << 20;
constexpr uint32_t kMaxNameLen = 4096;
constexpr uint32_t kMaxRank = 8;
constexpr int64_t kMaxElems = int64_t{1} << 33;
}  // namespace

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ostream& os, uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t read_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  ALIGNTS_CHECK(is.good(), "tensor container: truncated u32");
  return v;
}

uint64_t read_u64(std::istream& is) {
  uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  ALIGNTS_CHECK(is.good(), "tensor container: truncated u64");
  return v;
}

void write_bytes(std::ostream& os, const std::string& s) {
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_bytes(std::istream& is, size_t n) {
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  ALIGNTS_CHECK(is.good() || (is.eof() && static_cast<size_t>(is.gcount()) == n),
                "tensor container: truncated byte run of length ", n);
  return s;
}

void write_tensor_block(std::ostream& os, const NamedTensors& tensors) {
  os.write(kMagic, 4);
  write_u32(os, kTensorContainerVersion);
  write_u64(os, tensors.size());
  for (const auto& [name, t] : tensors) {
    ALIGNTS_CHECK(name.size() <= kMaxNameLen, "tensor name too long: ", name.size());
    write_u32(os, static_cast<uint32_t>(name.size()));
    write_bytes(os, name);
    write_u32(os, static_cast<uint32_t>(t.rank()));
    for (int64_t d : t.shape) write_u64(os, static_cast<uint64_t>(d));
    os.write(reinterpret_cast<const char*>(t.values.data()),
             static_cast<std::streamsize>(t.values.size() * sizeof(double)));
  }
  ALIGNTS_CHECK(os.good(), "tensor container: write failed");
}

NamedTensors read_tensor_block(std::istream& is) {
  char magic[4] = {};
  is.read(magic, 4);
  ALIGNTS_CHECK(is.good() && std::memcmp(magic, kMagic, 4) == 0,
                "tensor container: bad magic");
  uint32_t version = read_u32(is);
  ALIGNTS_CHECK(version == kTensorContainerVersion, "tensor container: unknown version ", version);
  uint64_t n = read_u64(is);
  ALIGNTS_CHECK(n <= kMaxEntries, "tensor container: implausible entry count ", n);
  NamedTensors out;
  out.reserve(n);
  for (uint64_t e = 0; e < n; ++e) {
    uint32_t name_len = read_u32(is);
    ALIGNTS_CHECK(name_len <= kMaxNameLen, "tensor container: name length ", name_len);
    std::string name = read_bytes(is, name_len);
    uint32_t rank = read_u32(is);
    ALIGNTS_CHECK(rank <= kMaxRank, "tensor container: rank ", rank);
    std::vector<int64_t> shape(rank);
    for (uint32_t i = 0; i < rank; ++i) shape[i] = static_cast<int64_t>(read_u64(is));
    int64_t count = numerics::shape_product(shape);
    ALIGNTS_CHECK(count >= 0 && count <= kMaxElems, "tensor container: element count ", count);
    std::vector<double> values(static_cast<size_t>(count));
    is.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    ALIGNTS_CHECK(is.good() || is.eof(), "tensor container: truncated data for ", name);
    ALIGNTS_CHECK(static_cast<size_t>(is.gcount()) == values.size() * sizeof(double) ||
                      values.empty(),
                  "tensor container: truncated data for ", name);
    out.emplace_back(std::move(name), numerics::Tensor(std::move(shape), std::move(values)));
  }
  return out;
}

void save_tensors(const std::filesystem::path& path, const NamedTensors& tensors) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  ALIGNTS_CHECK(os.is_open(), "cannot open for writing: ", path.string());
  write_tensor_block(os, tensors);
  os.close();
  ALIGNTS_CHECK(os.good(), "write failed: ", path.string());
}

NamedTensors load_tensors(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  ALIGNTS_CHECK(is.is_open(), "cannot open: ", path.string());
  return read_tensor_block(is);
}

const numerics::Tensor* find_tensor(const NamedTensors& tensors, const std::string& name) {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

}  // namespace alignts::io
