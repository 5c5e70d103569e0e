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

// Data-parallel inner loops shared by the keyframe, audio and kernel modules.
//
// Each kernel has a scalar reference implementation and optional AVX2 (x86-64)
// and NEON (AArch64) variants. The active variant is chosen once at startup
// from CPUID / the build target, and can be forced with the environment
// variable VIDCHECK_SIMD=scalar|avx2|neon.
//
// The u8 kernels are integer-exact, so all variants agree bit for bit.
// The f64 kernels reassociate sums; variants agree to rounding only.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace vidcheck::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct DotStats {
  std::uint64_t ab = 0;
  std::uint64_t aa = 0;
  std::uint64_t bb = 0;

  friend bool operator==(const DotStats&, const DotStats&) = default;
};

struct KernelTable {
  Isa isa;
  // sum |a[i] - b[i]|
  std::uint64_t (*sum_abs_diff_u8)(const std::uint8_t* a, const std::uint8_t* b,
                                   std::size_t n);
  // sum a*b, sum a*a, sum b*b in one pass
  DotStats (*dot_stats_u8)(const std::uint8_t* a, const std::uint8_t* b,
                           std::size_t n);
  double (*dot_f64)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy_f64)(double alpha, const double* x, double* y, std::size_t n);
  // out[i] = a[i]^2 + b[i]^2
  void (*norm_sq_f64)(const double* re, const double* im, double* out,
                      std::size_t n);
};

bool isa_supported(Isa isa) noexcept;

// Throws Error(Errc::UnsupportedIsa) when the variant is not built or the CPU
// lacks it.
const KernelTable& kernels_for(Isa isa);

// The dispatched table.
const KernelTable& active() noexcept;

std::vector<Isa> supported_isas();

// Span front-ends over the active table. Length preconditions are the caller's.
inline std::uint64_t sum_abs_diff(std::span<const std::uint8_t> a,
                                  std::span<const std::uint8_t> b) {
  return active().sum_abs_diff_u8(a.data(), b.data(), a.size());
}
inline DotStats dot_stats(std::span<const std::uint8_t> a,
                          std::span<const std::uint8_t> b) {
  return active().dot_stats_u8(a.data(), b.data(), a.size());
}
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot_f64(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy_f64(alpha, x.data(), y.data(), x.size());
}

namespace detail {
const KernelTable& scalar_table() noexcept;
#if defined(VIDCHECK_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif
#if defined(VIDCHECK_HAVE_NEON)
const KernelTable& neon_table() noexcept;
#endif
}  // namespace detail

}  // namespace vidcheck::simd
