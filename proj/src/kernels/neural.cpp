// Copyright 2026 The vidcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vidcheck/kernels/neural.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "vidcheck/error.hpp"
#include "vidcheck/simd/kernels.hpp"

namespace vidcheck::kernels {
namespace {

std::string Shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

[[noreturn]] void ShapeError(const std::string& what) {
  throw Error(Errc::ShapeMismatch, what);
}

std::vector<double> MatVec(const Matrix& m, std::span<const double> x) {
  std::vector<double> y(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) y[r] = simd::dot(m.row(r), x);
  return y;
}

}  // namespace

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) ShapeError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) ShapeError(Shape(a) + " * " + Shape(b));
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) simd::axpy(aik, b.row(k), c.row(i));
    }
  }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) t(c, r) = m(r, c);
  }
  return t;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) ShapeError("matrix JSON must be an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j[0].size();
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) ShapeError("ragged matrix JSON");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    j.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return j;
}

Matrix softmax_rows(const Matrix& scores) {
  Matrix out(scores.rows(), scores.cols());
  for (std::size_t r = 0; r < scores.rows(); ++r) {
    const auto in = scores.row(r);
    if (in.empty()) continue;
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    auto dst = out.row(r);
    for (std::size_t c = 0; c < in.size(); ++c) {
      dst[c] = std::exp(in[c] - peak);
      total += dst[c];
    }
    for (double& v : dst) v /= total;
  }
  return out;
}

Matrix attention_weights(const Matrix& queries, const Matrix& keys) {
  if (queries.cols() == 0) ShapeError("d_k must be >= 1");
  if (queries.cols() != keys.cols()) ShapeError("Q " + Shape(queries) + " vs K " + Shape(keys));
  if (keys.rows() == 0) ShapeError("attention needs at least one key");
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(queries.cols()));
  Matrix scores(queries.rows(), keys.rows());
  for (std::size_t i = 0; i < queries.rows(); ++i) {
    for (std::size_t j = 0; j < keys.rows(); ++j) {
      scores(i, j) = simd::dot(queries.row(i), keys.row(j)) * inv_sqrt_dk;
    }
  }
  return softmax_rows(scores);
}

Matrix softmax_attention(const AttentionInputs& inputs) {
  if (inputs.keys.rows() != inputs.values.rows()) {
    ShapeError("K " + Shape(inputs.keys) + " vs V " + Shape(inputs.values));
  }
  return matmul(attention_weights(inputs.queries, inputs.keys), inputs.values);
}

std::vector<double> swiglu(std::span<const double> x, const SwigluParams& p) {
  const std::size_t d = x.size();
  if (p.w1.rows() != d || p.w1.cols() != d || p.w2.rows() != d || p.w2.cols() != d ||
      p.b1.size() != d || p.b2.size() != d) {
    ShapeError("SwiGLU parameters do not match input dimension " + std::to_string(d));
  }
  std::vector<double> gate = MatVec(p.w1, x);
  std::vector<double> out = MatVec(p.w2, x);
  for (std::size_t i = 0; i < d; ++i) {
    const double pre = gate[i] + p.b1[i];
    const double g = p.activation == GateActivation::sigmoid ? 1.0 / (1.0 + std::exp(-pre))
                                                             : std::max(0.0, pre);
    out[i] += p.b2[i] + x[i] * g;
  }
  return out;
}

Matrix lora_merge(const Matrix& weights, const LoraAdapter& adapter) {
  const std::size_t rank = adapter.a.cols();
  if (rank == 0 || adapter.b.rows() != rank) {
    ShapeError("A " + Shape(adapter.a) + " and B " + Shape(adapter.b) + " do not chain");
  }
  if (adapter.a.rows() != weights.rows() || adapter.b.cols() != weights.cols()) {
    ShapeError("A*B is " + std::to_string(adapter.a.rows()) + "x" +
               std::to_string(adapter.b.cols()) + ", W is " + Shape(weights));
  }
  if (rank > std::min(weights.rows(), weights.cols())) {
    ShapeError("rank " + std::to_string(rank) + " exceeds min(d, k)");
  }
  Matrix merged = weights;
  if (adapter.scale == 0.0) return merged;
  for (std::size_t i = 0; i < weights.rows(); ++i) {
    for (std::size_t r = 0; r < rank; ++r) {
      simd::axpy(adapter.scale * adapter.a(i, r), adapter.b.row(r), merged.row(i));
    }
  }
  return merged;
}

std::vector<double> concat_modalities(const ModalityVectors& m) {
  std::vector<double> out;
  out.reserve(m.text.size() + m.audio.size() + m.visual.size());
  out.insert(out.end(), m.text.begin(), m.text.end());
  out.insert(out.end(), m.audio.begin(), m.audio.end());
  out.insert(out.end(), m.visual.begin(), m.visual.end());
  return out;
}

std::vector<double> weighted_fusion(const ModalityVectors& m, const FusionWeights& w) {
  if (m.text.size() != m.audio.size() || m.text.size() != m.visual.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(m.text.size()) + "/" +
                                          std::to_string(m.audio.size()) + "/" +
                                          std::to_string(m.visual.size()));
  }
  if (!(w.alpha >= 0.0) || !(w.beta >= 0.0) || w.alpha + w.beta > 1.0 + 1e-12) {
    throw Error(Errc::InvalidWeights, "need alpha, beta >= 0 and alpha + beta <= 1");
  }
  const double gamma = std::max(0.0, w.gamma());
  std::vector<double> out(m.text.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = w.alpha * m.text[i] + w.beta * m.audio[i] + gamma * m.visual[i];
  }
  return out;
}

const ScoredCandidate& best_candidate(std::span<const ScoredCandidate> candidates) {
  if (candidates.empty()) throw Error(Errc::EmptyCandidates, "no decoding candidates");
  const ScoredCandidate* best = &candidates.front();
  for (const auto& c : candidates.subspan(1)) {
    if (c.score > best->score) best = &c;
  }
  return *best;
}

double lr_schedule(std::size_t step, std::size_t total_steps, std::size_t warmup_steps,
                   double lr_max, double lr_min) {
  if (total_steps == 0 || warmup_steps >= total_steps || step > total_steps ||
      !std::isfinite(lr_max) || !std::isfinite(lr_min)) {
    throw Error(Errc::InvalidSchedule,
                "step=" + std::to_string(step) + " total=" + std::to_string(total_steps) +
                    " warmup=" + std::to_string(warmup_steps));
  }
  if (step < warmup_steps) {
    return lr_max * static_cast<double>(step) / static_cast<double>(warmup_steps);
  }
  const double progress = static_cast<double>(step - warmup_steps) /
                          static_cast<double>(total_steps - warmup_steps);
  return lr_min + 0.5 * (lr_max - lr_min) * (1.0 + std::cos(std::numbers::pi * progress));
}

}  // namespace vidcheck::kernels
