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

#include "vidcheck/simd/kernels.hpp"

namespace vidcheck::simd::detail {
namespace {

std::uint64_t SumAbsDiffScalar(const std::uint8_t* a, const std::uint8_t* b,
                               std::size_t n) {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  }
  return sum;
}

DotStats DotStatsScalar(const std::uint8_t* a, const std::uint8_t* b,
                        std::size_t n) {
  DotStats s;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t x = a[i];
    const std::uint64_t y = b[i];
    s.ab += x * y;
    s.aa += x * x;
    s.bb += y * y;
  }
  return s;
}

double DotScalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void AxpyScalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void NormSqScalar(const double* re, const double* im, double* out,
                  std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

constexpr KernelTable kScalar{Isa::scalar, SumAbsDiffScalar, DotStatsScalar,
                              DotScalar,   AxpyScalar,       NormSqScalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace vidcheck::simd::detail
