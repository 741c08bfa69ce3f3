// include/alignts/numerics/tensor.hpp

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
#include <span>
#include <string>
#include <vector>

namespace alignts::numerics {

// Dense row-major double array with an optional gradient buffer of the same
// length. `grad` is empty unless alloc_grad() has been called.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int64_t> shape);  // zero-filled
  Tensor(std::vector<int64_t> shape, std::vector<double> values);

  static Tensor zeros(std::vector<int64_t> shape) { return Tensor(std::move(shape)); }
  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  int64_t size() const { return static_cast<int64_t>(values.size()); }
  int rank() const { return static_cast<int>(shape.size()); }
  int64_t dim(int i) const;
  // Rank-2 helpers.
  int64_t rows() const;
  int64_t cols() const;
  double& at(int64_t r, int64_t c) { return values[static_cast<size_t>(r * cols() + c)]; }
  double at(int64_t r, int64_t c) const { return values[static_cast<size_t>(r * cols() + c)]; }
  std::span<double> row_span(int64_t r);
  std::span<const double> row_span(int64_t r) const;

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
  std::string shape_str() const;
  bool all_finite() const;

  bool has_grad() const { return !grad.empty(); }
  void alloc_grad();  // zero-initialized
  void zero_grad();

  std::vector<int64_t> shape;
  std::vector<double> values;
  std::vector<double> grad;
};

int64_t shape_product(std::span<const int64_t> shape);

}  // namespace alignts::numerics
