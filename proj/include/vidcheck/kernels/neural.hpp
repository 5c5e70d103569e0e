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

// Desk-scale numeric kernels for fusion and adaptation: scaled dot-product
// attention, the gated SwiGLU adapter, LoRA weight merging, modality
// concatenation and weighted fusion, candidate rescoring and the warmup +
// cosine learning-rate schedule.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace vidcheck::kernels {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// a * b. Throws ShapeMismatch.
Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

// Row-major nested arrays, e.g. [[1,2],[3,4]]. Throws ShapeMismatch on ragged
// input.
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Matrix& m);

struct AttentionInputs {
  Matrix queries;  // n x d_k
  Matrix keys;     // m x d_k
  Matrix values;   // m x d_v
};

// Row-wise max-shifted softmax.
Matrix softmax_rows(const Matrix& scores);

// softmax(Q K^T / sqrt(d_k)), n x m. Throws ShapeMismatch.
Matrix attention_weights(const Matrix& queries, const Matrix& keys);

// softmax(Q K^T / sqrt(d_k)) V. Throws ShapeMismatch.
Matrix softmax_attention(const AttentionInputs& inputs);

enum class GateActivation { sigmoid, relu };

struct SwigluParams {
  Matrix w1;  // d x d
  Matrix w2;  // d x d
  std::vector<double> b1;
  std::vector<double> b2;
  GateActivation activation = GateActivation::sigmoid;
};

// x (.) act(W1 x + b1) + W2 x + b2. Throws ShapeMismatch.
std::vector<double> swiglu(std::span<const double> x, const SwigluParams& params);

struct LoraAdapter {
  Matrix a;  // d x r
  Matrix b;  // r x k
  double scale = 1.0;
};

// W + scale * A B. Throws ShapeMismatch.
Matrix lora_merge(const Matrix& weights, const LoraAdapter& adapter);

struct ModalityVectors {
  std::vector<double> text;
  std::vector<double> audio;
  std::vector<double> visual;
};

// text ++ audio ++ visual.
std::vector<double> concat_modalities(const ModalityVectors& m);

// Weights on the 2-simplex: visual gets 1 - alpha - beta.
struct FusionWeights {
  double alpha = 1.0 / 3.0;
  double beta = 1.0 / 3.0;

  double gamma() const noexcept { return 1.0 - alpha - beta; }
};

// alpha * text + beta * audio + gamma * visual. Throws LengthMismatch,
// InvalidWeights.
std::vector<double> weighted_fusion(const ModalityVectors& m, const FusionWeights& w);

struct ScoredCandidate {
  std::string sequence;
  double score = 0.0;
};

// Highest score; earliest wins ties. Throws EmptyCandidates.
const ScoredCandidate& best_candidate(std::span<const ScoredCandidate> candidates);

// Linear warmup from 0 to lr_max, then cosine decay to lr_min at total_steps.
// Throws InvalidSchedule.
double lr_schedule(std::size_t step, std::size_t total_steps, std::size_t warmup_steps,
                   double lr_max, double lr_min);

}  // namespace vidcheck::kernels
