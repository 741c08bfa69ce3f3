// src/numerics/tape.cc

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

#include "alignts/numerics/tape.hpp"

#include <cmath>

#include "alignts/common/error.hpp"
#include "alignts/numerics/math.hpp"

namespace alignts::numerics {

Tape::Node& Tape::node(Var v) {
  ALIGNTS_CHECK(v.id >= 0 && static_cast<size_t>(v.id) < nodes_.size(), "invalid Var id ", v.id);
  return nodes_[static_cast<size_t>(v.id)];
}

const Tape::Node& Tape::node(Var v) const {
  ALIGNTS_CHECK(v.id >= 0 && static_cast<size_t>(v.id) < nodes_.size(), "invalid Var id ", v.id);
  return nodes_[static_cast<size_t>(v.id)];
}

std::vector<double>* Tape::grad_buf(Var v) {
  Node& n = node(v);
  return n.requires_grad ? &n.grad : nullptr;
}

Var Tape::push(Tensor value, bool requires_grad,
               std::function<void(Tape&, const Node&)> fn) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  if (requires_grad) n.grad.assign(n.value.values.size(), 0.0);
  n.backward_fn = std::move(fn);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int32_t>(nodes_.size() - 1)};
}

Var Tape::leaf(Tensor value, bool requires_grad) {
  return push(std::move(value), requires_grad, nullptr);
}

std::span<const double> Tape::grad(Var v) const {
  const Node& n = node(v);
  return {n.grad.data(), n.grad.size()};
}

Var Tape::matvec(Var w, Var x) {
  const Tensor& wv = value(w);
  const Tensor& xv = value(x);
  ALIGNTS_CHECK(wv.rank() == 2 && xv.rank() == 1, "matvec: need [m x n] and [n], got ",
                wv.shape_str(), " and ", xv.shape_str());
  const int64_t m = wv.rows(), ncols = wv.cols();
  ALIGNTS_CHECK(ncols == xv.size(), "matvec: inner dim mismatch ", wv.shape_str(), " vs ",
                xv.shape_str());
  Tensor out({m});
  const double* wp = wv.values.data();
  const double* xp = xv.values.data();
  for (int64_t i = 0; i < m; ++i) {
    double acc = 0.0;
    const double* row = wp + i * ncols;
    for (int64_t j = 0; j < ncols; ++j) acc += row[j] * xp[j];
    out.values[static_cast<size_t>(i)] = acc;
  }
  bool rg = needs_grad(w) || needs_grad(x);
  return push(std::move(out), rg, [w, x, m, ncols](Tape& t, const Node& self) {
    const double* g = self.grad.data();
    const double* wp = t.value(w).values.data();
    const double* xp = t.value(x).values.data();
    if (auto* dw = t.grad_buf(w)) {
      double* d = dw->data();
      for (int64_t i = 0; i < m; ++i) {
        const double gi = g[i];
        if (gi == 0.0) continue;
        double* drow = d + i * ncols;
        for (int64_t j = 0; j < ncols; ++j) drow[j] += gi * xp[j];
      }
    }
    if (auto* dx = t.grad_buf(x)) {
      double* d = dx->data();
      for (int64_t i = 0; i < m; ++i) {
        const double gi = g[i];
        if (gi == 0.0) continue;
        const double* row = wp + i * ncols;
        for (int64_t j = 0; j < ncols; ++j) d[j] += gi * row[j];
      }
    }
  });
}

Var Tape::add(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  ALIGNTS_CHECK(av.same_shape(bv), "add: shape mismatch ", av.shape_str(), " vs ", bv.shape_str());
  Tensor out(av.shape);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = av.values[i] + bv.values[i];
  bool rg = needs_grad(a) || needs_grad(b);
  return push(std::move(out), rg, [a, b](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      for (size_t i = 0; i < self.grad.size(); ++i) (*da)[i] += self.grad[i];
    }
    if (auto* db = t.grad_buf(b)) {
      for (size_t i = 0; i < self.grad.size(); ++i) (*db)[i] += self.grad[i];
    }
  });
}

Var Tape::mul(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  ALIGNTS_CHECK(av.same_shape(bv), "mul: shape mismatch ", av.shape_str(), " vs ", bv.shape_str());
  Tensor out(av.shape);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = av.values[i] * bv.values[i];
  bool rg = needs_grad(a) || needs_grad(b);
  return push(std::move(out), rg, [a, b](Tape& t, const Node& self) {
    const auto& av = t.value(a).values;
    const auto& bv = t.value(b).values;
    if (auto* da = t.grad_buf(a)) {
      for (size_t i = 0; i < self.grad.size(); ++i) (*da)[i] += self.grad[i] * bv[i];
    }
    if (auto* db = t.grad_buf(b)) {
      for (size_t i = 0; i < self.grad.size(); ++i) (*db)[i] += self.grad[i] * av[i];
    }
  });
}

Var Tape::affine(Var a, double scale, double shift) {
  const Tensor& av = value(a);
  Tensor out(av.shape);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = scale * av.values[i] + shift;
  return push(std::move(out), needs_grad(a), [a, scale](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      for (size_t i = 0; i < self.grad.size(); ++i) (*da)[i] += scale * self.grad[i];
    }
  });
}

Var Tape::sigmoid(Var a) {
  const Tensor& av = value(a);
  Tensor out(av.shape);
  for (size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = 1.0 / (1.0 + std::exp(-av.values[i]));
  }
  return push(std::move(out), needs_grad(a), [a](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      const auto& y = self.value.values;
      for (size_t i = 0; i < self.grad.size(); ++i) {
        (*da)[i] += self.grad[i] * y[i] * (1.0 - y[i]);
      }
    }
  });
}

Var Tape::tanh_op(Var a) {
  const Tensor& av = value(a);
  Tensor out(av.shape);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::tanh(av.values[i]);
  return push(std::move(out), needs_grad(a), [a](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      const auto& y = self.value.values;
      for (size_t i = 0; i < self.grad.size(); ++i) {
        (*da)[i] += self.grad[i] * (1.0 - y[i] * y[i]);
      }
    }
  });
}

Var Tape::exp_op(Var a) {
  const Tensor& av = value(a);
  Tensor out(av.shape);
  for (size_t i = 0; i < out.values.size(); ++i) out.values[i] = std::exp(av.values[i]);
  return push(std::move(out), needs_grad(a), [a](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      const auto& y = self.value.values;
      for (size_t i = 0; i < self.grad.size(); ++i) (*da)[i] += self.grad[i] * y[i];
    }
  });
}

Var Tape::slice(Var a, int64_t offset, int64_t len) {
  const Tensor& av = value(a);
  ALIGNTS_CHECK(av.rank() == 1, "slice: rank-1 expected, got ", av.shape_str());
  ALIGNTS_CHECK(offset >= 0 && len >= 0 && offset + len <= av.size(), "slice: range [", offset,
                ", ", offset + len, ") out of bounds for ", av.shape_str());
  Tensor out({len});
  for (int64_t i = 0; i < len; ++i) {
    out.values[static_cast<size_t>(i)] = av.values[static_cast<size_t>(offset + i)];
  }
  return push(std::move(out), needs_grad(a), [a, offset, len](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      for (int64_t i = 0; i < len; ++i) {
        (*da)[static_cast<size_t>(offset + i)] += self.grad[static_cast<size_t>(i)];
      }
    }
  });
}

Var Tape::concat(Var a, Var b) {
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  ALIGNTS_CHECK(av.rank() == 1 && bv.rank() == 1, "concat: rank-1 expected");
  Tensor out({av.size() + bv.size()});
  std::copy(av.values.begin(), av.values.end(), out.values.begin());
  std::copy(bv.values.begin(), bv.values.end(), out.values.begin() + av.values.size());
  bool rg = needs_grad(a) || needs_grad(b);
  int64_t na = av.size();
  return push(std::move(out), rg, [a, b, na](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      for (int64_t i = 0; i < na; ++i) (*da)[static_cast<size_t>(i)] += self.grad[static_cast<size_t>(i)];
    }
    if (auto* db = t.grad_buf(b)) {
      for (size_t i = static_cast<size_t>(na); i < self.grad.size(); ++i) {
        (*db)[i - static_cast<size_t>(na)] += self.grad[i];
      }
    }
  });
}

Var Tape::row(Var m, int64_t r) {
  const Tensor& mv = value(m);
  ALIGNTS_CHECK(mv.rank() == 2, "row: rank-2 expected, got ", mv.shape_str());
  ALIGNTS_CHECK(r >= 0 && r < mv.rows(), "row: index ", r, " out of range for ", mv.shape_str());
  const int64_t k = mv.cols();
  Tensor out({k});
  auto src = mv.row_span(r);
  std::copy(src.begin(), src.end(), out.values.begin());
  return push(std::move(out), needs_grad(m), [m, r, k](Tape& t, const Node& self) {
    if (auto* dm = t.grad_buf(m)) {
      for (int64_t i = 0; i < k; ++i) {
        (*dm)[static_cast<size_t>(r * k + i)] += self.grad[static_cast<size_t>(i)];
      }
    }
  });
}

Var Tape::stack_rows(const std::vector<Var>& rows) {
  ALIGNTS_CHECK(!rows.empty(), "stack_rows: empty input");
  const int64_t k = value(rows[0]).size();
  bool rg = false;
  for (Var v : rows) {
    const Tensor& tv = value(v);
    ALIGNTS_CHECK(tv.rank() == 1 && tv.size() == k, "stack_rows: inconsistent row shapes");
    rg = rg || needs_grad(v);
  }
  const int64_t t_len = static_cast<int64_t>(rows.size());
  Tensor out({t_len, k});
  for (int64_t r = 0; r < t_len; ++r) {
    const auto& src = value(rows[static_cast<size_t>(r)]).values;
    std::copy(src.begin(), src.end(), out.values.begin() + r * k);
  }
  return push(std::move(out), rg, [rows, k](Tape& t, const Node& self) {
    for (size_t r = 0; r < rows.size(); ++r) {
      if (auto* dr = t.grad_buf(rows[r])) {
        for (int64_t i = 0; i < k; ++i) {
          (*dr)[static_cast<size_t>(i)] += self.grad[r * static_cast<size_t>(k) + static_cast<size_t>(i)];
        }
      }
    }
  });
}

Var Tape::log_softmax_rows_op(Var a) {
  const Tensor& av = value(a);
  Tensor out = log_softmax_rows(av);
  const int64_t rows = av.rows(), cols = av.cols();
  return push(std::move(out), needs_grad(a), [a, rows, cols](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      // dx = g - softmax(x) * sum(g) per row; softmax = exp(log_softmax).
      for (int64_t r = 0; r < rows; ++r) {
        double gsum = 0.0;
        for (int64_t c = 0; c < cols; ++c) gsum += self.grad[static_cast<size_t>(r * cols + c)];
        for (int64_t c = 0; c < cols; ++c) {
          size_t i = static_cast<size_t>(r * cols + c);
          (*da)[i] += self.grad[i] - std::exp(self.value.values[i]) * gsum;
        }
      }
    }
  });
}

Var Tape::sum_all(Var a) {
  const Tensor& av = value(a);
  double s = 0.0;
  for (double v : av.values) s += v;
  return push(Tensor::scalar(s), needs_grad(a), [a](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      for (double& d : *da) d += self.grad[0];
    }
  });
}

Var Tape::mean_all(Var a) {
  const Tensor& av = value(a);
  const double n = static_cast<double>(av.size());
  double s = 0.0;
  for (double v : av.values) s += v;
  return push(Tensor::scalar(s / n), needs_grad(a), [a, n](Tape& t, const Node& self) {
    if (auto* da = t.grad_buf(a)) {
      const double g = self.grad[0] / n;
      for (double& d : *da) d += g;
    }
  });
}

void Tape::backward(Var root) {
  const Tensor& rv = value(root);
  ALIGNTS_CHECK(rv.size() == 1, "backward: root must be scalar, got ", rv.shape_str());
  double one = 1.0;
  Seed s{root, std::span<const double>(&one, 1)};
  backward(std::span<const Seed>(&s, 1));
}

void Tape::backward(std::span<const Seed> seeds) {
  ALIGNTS_CHECK(!ran_backward_, "backward: tape already consumed");
  ran_backward_ = true;
  for (const Seed& s : seeds) {
    Node& n = node(s.var);
    ALIGNTS_CHECK(s.grad.size() == n.value.values.size(), "backward: seed size ", s.grad.size(),
                  " does not match value size ", n.value.values.size());
    if (!n.requires_grad) continue;  // seeding a constant is a no-op
    for (size_t i = 0; i < s.grad.size(); ++i) n.grad[i] += s.grad[i];
  }
  for (size_t i = nodes_.size(); i-- > 0;) {
    Node& n = nodes_[i];
    if (n.requires_grad && n.backward_fn) n.backward_fn(*this, n);
  }
}

}  // namespace alignts::numerics
