// src/numerics/tensor.cc

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

#include "alignts/numerics/tensor.hpp"

#include <cmath>

#include "alignts/common/error.hpp"

namespace alignts::numerics {

int64_t shape_product(std::span<const int64_t> shape) {
  int64_t p = 1;
  for (int64_t d : shape) {
    ALIGNTS_CHECK(d >= 0, "negative dimension ", d);
    p *= d;
  }
  return p;
}

Tensor::Tensor(std::vector<int64_t> shape_in) : shape(std::move(shape_in)) {
  values.assign(static_cast<size_t>(shape_product(shape)), 0.0);
}

Tensor::Tensor(std::vector<int64_t> shape_in, std::vector<double> values_in)
    : shape(std::move(shape_in)), values(std::move(values_in)) {
  ALIGNTS_CHECK(shape_product(shape) == static_cast<int64_t>(values.size()),
                "shape ", shape_str(), " does not match ", values.size(), " values");
}

int64_t Tensor::dim(int i) const {
  ALIGNTS_CHECK(i >= 0 && i < rank(), "dim index ", i, " out of range for rank ", rank());
  return shape[static_cast<size_t>(i)];
}

int64_t Tensor::rows() const {
  ALIGNTS_CHECK(rank() == 2, "rows() on rank-", rank(), " tensor");
  return shape[0];
}

int64_t Tensor::cols() const {
  ALIGNTS_CHECK(rank() == 2, "cols() on rank-", rank(), " tensor");
  return shape[1];
}

std::span<double> Tensor::row_span(int64_t r) {
  return {values.data() + r * cols(), static_cast<size_t>(cols())};
}

std::span<const double> Tensor::row_span(int64_t r) const {
  return {values.data() + r * cols(), static_cast<size_t>(cols())};
}

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

bool Tensor::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::alloc_grad() { grad.assign(values.size(), 0.0); }

void Tensor::zero_grad() {
  if (grad.empty()) {
    alloc_grad();
  } else {
    grad.assign(values.size(), 0.0);
  }
}

}  // namespace alignts::numerics
