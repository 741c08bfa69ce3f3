// tests/testing/oracles.hpp
//
// Independent reference implementations used as test oracles. Everything here
// is deliberately written with plain loops, separate from the library code
// paths it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "alignts/numerics/rng.hpp"
#include "alignts/numerics/tensor.hpp"

namespace alignts::testing {

// Direct exp/sum softmax, no max subtraction (safe for small inputs only).
inline std::vector<double> naive_softmax(const std::vector<double>& row) {
  double sum = 0.0;
  std::vector<double> out(row.size());
  for (size_t i = 0; i < row.size(); ++i) {
    out[i] = std::exp(row[i]);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

// Plain Wagner-Fischer distance, no backtrace.
inline int naive_edit_distance(const std::vector<int>& a, const std::vector<int>& b) {
  const size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      d[i][j] = std::min({d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1), d[i - 1][j] + 1,
                          d[i][j - 1] + 1});
    }
  }
  return d[n][m];
}

// Scalar GRU unroll matching the documented recurrence, one step at a time.
// Weights are row-major [3H x d] with gate order reset, update, candidate.
struct NaiveGruWeights {
  std::vector<double> w_ih, w_hh, b_ih, b_hh;
  int hidden = 0;
  int input = 0;
};

inline std::vector<std::vector<double>> naive_gru(const NaiveGruWeights& w,
                                                  const std::vector<std::vector<double>>& inputs,
                                                  bool backward) {
  const int h = w.hidden;
  auto matvec = [](const std::vector<double>& mat, const std::vector<double>& x, int rows,
                   int cols) {
    std::vector<double> out(static_cast<size_t>(rows), 0.0);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        out[static_cast<size_t>(i)] +=
            mat[static_cast<size_t>(i * cols + j)] * x[static_cast<size_t>(j)];
      }
    }
    return out;
  };
  std::vector<std::vector<double>> outputs(inputs.size());
  std::vector<double> state(static_cast<size_t>(h), 0.0);
  for (size_t step = 0; step < inputs.size(); ++step) {
    const size_t t = backward ? inputs.size() - 1 - step : step;
    std::vector<double> gi = matvec(w.w_ih, inputs[t], 3 * h, w.input);
    std::vector<double> gh = matvec(w.w_hh, state, 3 * h, h);
    for (int i = 0; i < 3 * h; ++i) {
      gi[static_cast<size_t>(i)] += w.b_ih[static_cast<size_t>(i)];
      gh[static_cast<size_t>(i)] += w.b_hh[static_cast<size_t>(i)];
    }
    std::vector<double> next(static_cast<size_t>(h));
    for (int i = 0; i < h; ++i) {
      const double r = 1.0 / (1.0 + std::exp(-(gi[static_cast<size_t>(i)] + gh[static_cast<size_t>(i)])));
      const double z =
          1.0 / (1.0 + std::exp(-(gi[static_cast<size_t>(h + i)] + gh[static_cast<size_t>(h + i)])));
      const double n =
          std::tanh(gi[static_cast<size_t>(2 * h + i)] + r * gh[static_cast<size_t>(2 * h + i)]);
      next[static_cast<size_t>(i)] = z * state[static_cast<size_t>(i)] + (1.0 - z) * n;
    }
    outputs[t] = next;
    state = next;
  }
  return outputs;
}

// Random [T x K] posteriorgram rows via normalized uniforms.
inline numerics::Tensor random_posteriorgram(numerics::Rng& rng, int64_t t_len, int64_t k) {
  numerics::Tensor probs({t_len, k});
  for (int64_t t = 0; t < t_len; ++t) {
    double sum = 0.0;
    for (int64_t c = 0; c < k; ++c) {
      const double v = 0.05 + rng.uniform();
      probs.at(t, c) = v;
      sum += v;
    }
    for (int64_t c = 0; c < k; ++c) probs.at(t, c) /= sum;
  }
  return probs;
}

}  // namespace alignts::testing
