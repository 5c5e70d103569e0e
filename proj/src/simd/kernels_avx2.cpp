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

// Compiled with -mavx2 -mfma. Only reached after a runtime CPUID check.

#include <immintrin.h>

#include "vidcheck/simd/kernels.hpp"

namespace vidcheck::simd::detail {
namespace {

inline std::uint64_t HorizontalSumU64(__m256i v) {
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

inline double HorizontalSumF64(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

// Widen 8 non-negative int32 lanes and add them into 4 uint64 lanes.
inline __m256i AccumulateU32(__m256i acc64, __m256i v32) {
  const __m256i lo = _mm256_cvtepu32_epi64(_mm256_castsi256_si128(v32));
  const __m256i hi = _mm256_cvtepu32_epi64(_mm256_extracti128_si256(v32, 1));
  return _mm256_add_epi64(acc64, _mm256_add_epi64(lo, hi));
}

std::uint64_t SumAbsDiffAvx2(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(va, vb));
  }
  std::uint64_t sum = HorizontalSumU64(acc);
  for (; i < n; ++i) sum += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return sum;
}

DotStats DotStatsAvx2(const std::uint8_t* a, const std::uint8_t* b,
                      std::size_t n) {
  // Each madd lane gains at most 2 * 255 * 255 per 16-byte step; two steps
  // per iteration. 8192 iterations stay below INT32_MAX.
  constexpr std::size_t kBlock = 8192;
  __m256i ab64 = _mm256_setzero_si256();
  __m256i aa64 = _mm256_setzero_si256();
  __m256i bb64 = _mm256_setzero_si256();
  std::size_t i = 0;
  while (i + 32 <= n) {
    __m256i ab32 = _mm256_setzero_si256();
    __m256i aa32 = _mm256_setzero_si256();
    __m256i bb32 = _mm256_setzero_si256();
    for (std::size_t it = 0; it < kBlock && i + 32 <= n; ++it, i += 32) {
      for (std::size_t half = 0; half < 32; half += 16) {
        const __m256i va = _mm256_cvtepu8_epi16(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(a + i + half)));
        const __m256i vb = _mm256_cvtepu8_epi16(
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(b + i + half)));
        ab32 = _mm256_add_epi32(ab32, _mm256_madd_epi16(va, vb));
        aa32 = _mm256_add_epi32(aa32, _mm256_madd_epi16(va, va));
        bb32 = _mm256_add_epi32(bb32, _mm256_madd_epi16(vb, vb));
      }
    }
    ab64 = AccumulateU32(ab64, ab32);
    aa64 = AccumulateU32(aa64, aa32);
    bb64 = AccumulateU32(bb64, bb32);
  }
  DotStats s{HorizontalSumU64(ab64), HorizontalSumU64(aa64),
             HorizontalSumU64(bb64)};
  for (; i < n; ++i) {
    const std::uint64_t x = a[i];
    const std::uint64_t y = b[i];
    s.ab += x * y;
    s.aa += x * x;
    s.bb += y * y;
  }
  return s;
}

double DotAvx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  __m256d acc3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    acc2 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 8), _mm256_loadu_pd(b + i + 8), acc2);
    acc3 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 12), _mm256_loadu_pd(b + i + 12), acc3);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double sum = HorizontalSumF64(
      _mm256_add_pd(_mm256_add_pd(acc0, acc1), _mm256_add_pd(acc2, acc3)));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void AxpyAvx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void NormSqAvx2(const double* re, const double* im, double* out,
                std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    _mm256_storeu_pd(out + i, _mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m)));
  }
  for (; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

constexpr KernelTable kAvx2{Isa::avx2, SumAbsDiffAvx2, DotStatsAvx2,
                            DotAvx2,   AxpyAvx2,       NormSqAvx2};

}  // namespace

const KernelTable& avx2_table() noexcept { return kAvx2; }

}  // namespace vidcheck::simd::detail
