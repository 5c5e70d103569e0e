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

#include <cstdlib>
#include <string>

#include "vidcheck/error.hpp"
#include "vidcheck/simd/kernels.hpp"

namespace vidcheck::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "scalar";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(VIDCHECK_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(VIDCHECK_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_supported(isa)) {
    throw Error(Errc::UnsupportedIsa, std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(VIDCHECK_HAVE_AVX2)
    case Isa::avx2: return detail::avx2_table();
#endif
#if defined(VIDCHECK_HAVE_NEON)
    case Isa::neon: return detail::neon_table();
#endif
    default: return detail::scalar_table();
  }
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (isa_supported(isa)) out.push_back(isa);
  }
  return out;
}

namespace {

const KernelTable& Select() noexcept {
  if (const char* forced = std::getenv("VIDCHECK_SIMD")) {
    const std::string name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == isa_name(isa) && isa_supported(isa)) return kernels_for(isa);
    }
  }
  if (isa_supported(Isa::avx2)) return kernels_for(Isa::avx2);
  if (isa_supported(Isa::neon)) return kernels_for(Isa::neon);
  return detail::scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = Select();
  return table;
}

}  // namespace vidcheck::simd
