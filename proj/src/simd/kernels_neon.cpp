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

// AArch64 only; NEON is baseline there so no runtime probe is needed.

#include <arm_neon.h>

#include "vidcheck/simd/kernels.hpp"

namespace vidcheck::simd::detail {
namespace {

std::uint64_t SumAbsDiffNeon(const std::uint8_t* a, const std::uint8_t* b,
                             std::size_t n) {
  // A u32 lane gains at most 2 * 255 per step.
  constexpr std::size_t kBlock = std::size_t{1} << 20;
  uint64x2_t acc64 = vdupq_n_u64(0);
  std::size_t i = 0;
  while (i + 16 <= n) {
    uint32x4_t acc32 = vdupq_n_u32(0);
    for (std::size_t it = 0; it < kBlock && i + 16 <= n; ++it, i += 16) {
      const uint8x16_t d = vabdq_u8(vld1q_u8(a + i), vld1q_u8(b + i));
      acc32 = vpadalq_u16(acc32, vpaddlq_u8(d));
    }
    acc64 = vpadalq_u32(acc64, acc32);
  }
  std::uint64_t sum = vaddvq_u64(acc64);
  for (; i < n; ++i) sum += a[i] > b[i] ? a[i] - b[i] : b[i] - a[i];
  return sum;
}

DotStats DotStatsNeon(const std::uint8_t* a, const std::uint8_t* b,
                      std::size_t n) {
  // A u32 lane gains at most 4 * 255 * 255 per 16-byte step.
  constexpr std::size_t kBlock = 8192;
  uint64x2_t ab64 = vdupq_n_u64(0);
  uint64x2_t aa64 = vdupq_n_u64(0);
  uint64x2_t bb64 = vdupq_n_u64(0);
  std::size_t i = 0;
  while (i + 16 <= n) {
    uint32x4_t ab32 = vdupq_n_u32(0);
    uint32x4_t aa32 = vdupq_n_u32(0);
    uint32x4_t bb32 = vdupq_n_u32(0);
    for (std::size_t it = 0; it < kBlock && i + 16 <= n; ++it, i += 16) {
      const uint8x16_t va = vld1q_u8(a + i);
      const uint8x16_t vb = vld1q_u8(b + i);
      const uint8x8_t al = vget_low_u8(va);
      const uint8x8_t ah = vget_high_u8(va);
      const uint8x8_t bl = vget_low_u8(vb);
      const uint8x8_t bh = vget_high_u8(vb);
      ab32 = vpadalq_u16(ab32, vmull_u8(al, bl));
      ab32 = vpadalq_u16(ab32, vmull_u8(ah, bh));
      aa32 = vpadalq_u16(aa32, vmull_u8(al, al));
      aa32 = vpadalq_u16(aa32, vmull_u8(ah, ah));
      bb32 = vpadalq_u16(bb32, vmull_u8(bl, bl));
      bb32 = vpadalq_u16(bb32, vmull_u8(bh, bh));
    }
    ab64 = vpadalq_u32(ab64, ab32);
    aa64 = vpadalq_u32(aa64, aa32);
    bb64 = vpadalq_u32(bb64, bb32);
  }
  DotStats s{vaddvq_u64(ab64), vaddvq_u64(aa64), vaddvq_u64(bb64)};
  for (; i < n; ++i) {
    const std::uint64_t x = a[i];
    const std::uint64_t y = b[i];
    s.ab += x * y;
    s.aa += x * x;
    s.bb += y * y;
  }
  return s;
}

double DotNeon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void AxpyNeon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void NormSqNeon(const double* re, const double* im, double* out,
                std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vld1q_f64(re + i);
    const float64x2_t m = vld1q_f64(im + i);
    vst1q_f64(out + i, vfmaq_f64(vmulq_f64(m, m), r, r));
  }
  for (; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
}

constexpr KernelTable kNeon{Isa::neon, SumAbsDiffNeon, DotStatsNeon,
                            DotNeon,   AxpyNeon,       NormSqNeon};

}  // namespace

const KernelTable& neon_table() noexcept { return kNeon; }

}  // namespace vidcheck::simd::detail
