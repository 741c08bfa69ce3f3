// include/alignts/numerics/tape.hpp

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

#include <functional>
#include <span>
#include <vector>

#include "alignts/numerics/tensor.hpp"

namespace alignts::numerics {

// Handle into a Tape.
struct Var {
  int32_t id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode tape over a fixed op vocabulary. Ops append nodes; nodes only
// reference earlier nodes, so reverse creation order is a topological order
// for the backward sweep. A tape is single-writer and is used for one
// forward/backward pass.
//
// Vectors are rank-1 tensors; sequences of frames are stacked into rank-2
// tensors only where needed (stack_rows / log_softmax_rows).
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Leaves. `requires_grad` marks trainable inputs; constants never receive
  // gradient and cut the backward sweep.
  Var leaf(Tensor value, bool requires_grad);
  Var constant(Tensor value) { return leaf(std::move(value), false); }

  const Tensor& value(Var v) const { return node(v).value; }
  // Gradient accumulated during backward; empty span if the node does not
  // require grad.
  std::span<const double> grad(Var v) const;

  // W [m x n] times x [n] -> [m].
  Var matvec(Var w, Var x);
  Var add(Var a, Var b);           // same shape, elementwise
  Var mul(Var a, Var b);           // same shape, elementwise
  Var affine(Var a, double scale, double shift);  // scale * a + shift
  Var sigmoid(Var a);
  Var tanh_op(Var a);
  Var exp_op(Var a);
  Var slice(Var a, int64_t offset, int64_t len);  // rank-1 sub-range
  Var concat(Var a, Var b);                       // rank-1 concatenation
  Var row(Var m, int64_t r);                      // rank-2 -> rank-1
  Var stack_rows(const std::vector<Var>& rows);   // T x [K] -> [T x K]
  Var log_softmax_rows_op(Var a);                 // rank-2, row-wise
  Var sum_all(Var a);                             // -> scalar [1]
  Var mean_all(Var a);                            // -> scalar [1]

  struct Seed {
    Var var;
    std::span<const double> grad;
  };

  // Backward from a scalar root with seed 1.
  void backward(Var root);
  // Backward from several seeds at once (gradients accumulate additively).
  void backward(std::span<const Seed> seeds);

  size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    std::vector<double> grad;  // allocated iff requires_grad
    bool requires_grad = false;
    // Reads this node's grad and accumulates into parents.
    std::function<void(Tape&, const Node&)> backward_fn;
  };

  Node& node(Var v);
  const Node& node(Var v) const;
  Var push(Tensor value, bool requires_grad, std::function<void(Tape&, const Node&)> fn);
  bool needs_grad(Var v) const { return node(v).requires_grad; }
  std::vector<double>* grad_buf(Var v);

  std::vector<Node> nodes_;
  bool ran_backward_ = false;
};

}  // namespace alignts::numerics
