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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vidcheck/error.hpp"
#include "vidcheck/simd/kernels.hpp"

namespace vidcheck::simd {
namespace {

std::vector<std::uint8_t> bytes(std::mt19937_64& rng, std::size_t n, bool extremes) {
  std::vector<std::uint8_t> v(n);
  std::uniform_int_distribution<int> d(0, 255);
  for (auto& x : v) x = extremes ? (d(rng) & 1 ? 255 : 0) : static_cast<std::uint8_t>(d(rng));
  return v;
}

std::vector<double> reals(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> v(n);
  std::uniform_real_distribution<double> d(-10.0, 10.0);
  for (auto& x : v) x = d(rng);
  return v;
}

TEST(Simd, ScalarAlwaysSupported) {
  EXPECT_TRUE(isa_supported(Isa::scalar));
  EXPECT_EQ(kernels_for(Isa::scalar).isa, Isa::scalar);
  EXPECT_FALSE(supported_isas().empty());
}

TEST(Simd, UnsupportedVariantThrows) {
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (isa_supported(isa)) continue;
    try {
      kernels_for(isa);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::UnsupportedIsa);
    }
  }
}

TEST(Simd, ActiveIsSupported) { EXPECT_TRUE(isa_supported(active().isa)); }

// Lengths straddle every vector width and the 8192-element widening block.
const std::vector<std::size_t> kLengths = {0, 1, 7, 15, 16, 17, 31, 32, 33, 63, 64, 65,
                                           100, 255, 1000, 8191, 8192, 8193, 20000, 70001};

TEST(Simd, IntegerKernelsBitExactAcrossVariants) {
  std::mt19937_64 rng(11);
  const auto& ref = kernels_for(Isa::scalar);
  for (Isa isa : supported_isas()) {
    const auto& k = kernels_for(isa);
    for (std::size_t n : kLengths) {
      for (bool extremes : {false, true}) {
        const auto a = bytes(rng, n, extremes);
        const auto b = bytes(rng, n, extremes);
        EXPECT_EQ(k.sum_abs_diff_u8(a.data(), b.data(), n), ref.sum_abs_diff_u8(a.data(), b.data(), n))
            << isa_name(isa) << " n=" << n;
        EXPECT_EQ(k.dot_stats_u8(a.data(), b.data(), n), ref.dot_stats_u8(a.data(), b.data(), n))
            << isa_name(isa) << " n=" << n;
      }
    }
  }
}

TEST(Simd, ScalarIntegerKernelsMatchDefinition) {
  std::mt19937_64 rng(12);
  const auto& ref = kernels_for(Isa::scalar);
  const auto a = bytes(rng, 999, false);
  const auto b = bytes(rng, 999, false);
  std::uint64_t sad = 0, ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sad += static_cast<std::uint64_t>(std::abs(int(a[i]) - int(b[i])));
    ab += std::uint64_t(a[i]) * b[i];
    aa += std::uint64_t(a[i]) * a[i];
    bb += std::uint64_t(b[i]) * b[i];
  }
  EXPECT_EQ(ref.sum_abs_diff_u8(a.data(), b.data(), a.size()), sad);
  const DotStats want{ab, aa, bb};
  EXPECT_EQ(ref.dot_stats_u8(a.data(), b.data(), a.size()), want);
}

TEST(Simd, FloatKernelsAgreeToRounding) {
  std::mt19937_64 rng(13);
  const auto& ref = kernels_for(Isa::scalar);
  for (Isa isa : supported_isas()) {
    const auto& k = kernels_for(isa);
    for (std::size_t n : kLengths) {
      const auto a = reals(rng, n);
      const auto b = reals(rng, n);
      double abs_sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) abs_sum += std::abs(a[i] * b[i]);
      EXPECT_NEAR(k.dot_f64(a.data(), b.data(), n), ref.dot_f64(a.data(), b.data(), n),
                  1e-13 * (abs_sum + 1.0))
          << isa_name(isa) << " n=" << n;

      auto y1 = b, y2 = b;
      k.axpy_f64(0.75, a.data(), y1.data(), n);
      ref.axpy_f64(0.75, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(y1[i], y2[i], 1e-12 * (std::abs(y2[i]) + 1.0));

      std::vector<double> o1(n), o2(n);
      k.norm_sq_f64(a.data(), b.data(), o1.data(), n);
      ref.norm_sq_f64(a.data(), b.data(), o2.data(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(o1[i], o2[i], 1e-12 * (o2[i] + 1.0));
    }
  }
}

TEST(Simd, SpanFrontEndsUseActiveTable) {
  const std::vector<std::uint8_t> a = {0, 255}, b = {255, 255};
  EXPECT_EQ(sum_abs_diff(a, b), 255u);
  const std::vector<double> x = {1, 2, 3}, z = {4, 5, 6};
  EXPECT_DOUBLE_EQ(dot(x, z), 32.0);
  std::vector<double> y = {1, 1, 1};
  axpy(2.0, x, y);
  EXPECT_EQ(y, (std::vector<double>{3, 5, 7}));
}

}  // namespace
}  // namespace vidcheck::simd
