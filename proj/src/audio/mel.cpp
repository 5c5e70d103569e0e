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

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "vidcheck/audio/audio.hpp"
#include "vidcheck/error.hpp"
#include "vidcheck/simd/kernels.hpp"

namespace vidcheck::audio {
namespace {

// The FFTW planner is not re-entrant; execution on a finished plan is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

template <typename T>
struct FftwDeleter {
  void operator()(T* p) const noexcept { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
FftwBuffer<T> AllocFftw(std::size_t n) {
  return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

// One-sided real FFT with split real/imaginary outputs.
class RealFft {
 public:
  explicit RealFft(std::size_t n)
      : n_(n),
        in_(AllocFftw<double>(n)),
        re_(AllocFftw<double>(n / 2 + 1)),
        im_(AllocFftw<double>(n / 2 + 1)) {
    fftw_iodim dim{static_cast<int>(n), 1, 1};
    std::lock_guard lock(PlannerMutex());
    plan_ = fftw_plan_guru_split_dft_r2c(1, &dim, 0, nullptr, in_.get(), re_.get(),
                                         im_.get(), FFTW_ESTIMATE);
    if (plan_ == nullptr) throw Error(Errc::InvalidConfig, "FFTW could not plan n_fft");
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  ~RealFft() {
    std::lock_guard lock(PlannerMutex());
    fftw_destroy_plan(plan_);
  }

  double* input() noexcept { return in_.get(); }

  void power(double* out) {
    fftw_execute(plan_);
    simd::active().norm_sq_f64(re_.get(), im_.get(), out, n_ / 2 + 1);
  }

 private:
  std::size_t n_;
  FftwBuffer<double> in_;
  FftwBuffer<double> re_;
  FftwBuffer<double> im_;
  fftw_plan plan_ = nullptr;
};

std::vector<double> MakeWindow(const MelConfig& config) {
  std::vector<double> w(config.n_fft, 1.0);
  if (config.window == Window::hann) {
    for (std::size_t n = 0; n < config.n_fft; ++n) {
      w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                  static_cast<double>(config.n_fft));
    }
  }
  return w;
}

}  // namespace

double hz_to_mel(double hz) noexcept { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) noexcept {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

void validate(const MelConfig& config, std::uint32_t sample_rate_hz) {
  const auto fail = [](const std::string& what) { throw Error(Errc::InvalidConfig, what); };
  if (config.n_fft < 2 || (config.n_fft & (config.n_fft - 1)) != 0) {
    fail("n_fft must be a power of two >= 2");
  }
  if (config.hop == 0 || config.hop > config.n_fft) fail("hop must be in [1, n_fft]");
  if (config.n_mels == 0) fail("n_mels must be >= 1");
  if (sample_rate_hz == 0) fail("sample rate must be positive");
  if (!(config.f_min_hz >= 0.0) || !(config.f_min_hz < config.f_max_hz) ||
      config.f_max_hz > static_cast<double>(sample_rate_hz) / 2.0) {
    fail("need 0 <= f_min < f_max <= rate / 2");
  }
}

MelFilterbank mel_filterbank(const MelConfig& config, std::uint32_t sample_rate_hz) {
  validate(config, sample_rate_hz);
  MelFilterbank bank;
  bank.n_mels = config.n_mels;
  bank.n_bins = config.n_fft / 2 + 1;
  bank.weights.assign(bank.n_mels * bank.n_bins, 0.0);

  const double mel_lo = hz_to_mel(config.f_min_hz);
  const double mel_hi = hz_to_mel(config.f_max_hz);
  std::vector<double> points(config.n_mels + 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    points[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) /
                                       static_cast<double>(config.n_mels + 1));
  }
  const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(config.n_fft);

  for (std::size_t m = 0; m < bank.n_mels; ++m) {
    const double lo = points[m];
    const double center = points[m + 1];
    const double hi = points[m + 2];
    bank.centers_hz.push_back(center);
    bool any = false;
    for (std::size_t k = 0; k < bank.n_bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (f > lo && f <= center) {
        w = (f - lo) / (center - lo);
      } else if (f > center && f < hi) {
        w = (hi - f) / (hi - center);
      }
      bank.weights[m * bank.n_bins + k] = w;
      any = any || w > 0.0;
    }
    if (!any) {
      throw Error(Errc::InvalidConfig,
                  "mel filter " + std::to_string(m) +
                      " covers no FFT bin; lower n_mels or raise n_fft");
    }
  }
  return bank;
}

std::size_t frame_count(std::size_t signal_len, const MelConfig& config) {
  if (config.hop == 0) throw Error(Errc::InvalidConfig, "hop must be positive");
  if (signal_len < config.n_fft) {
    throw Error(Errc::SignalTooShort, std::to_string(signal_len) + " samples < n_fft " +
                                          std::to_string(config.n_fft));
  }
  return 1 + (signal_len - config.n_fft) / config.hop;
}

std::vector<double> power_spectrogram(const AudioSignal& signal, const MelConfig& config) {
  validate(config, signal.sample_rate_hz);
  const std::size_t frames = frame_count(signal.samples.size(), config);
  const std::size_t bins = config.n_fft / 2 + 1;
  const std::vector<double> window = MakeWindow(config);

  std::vector<double> power(frames * bins);
  RealFft fft(config.n_fft);
  for (std::size_t t = 0; t < frames; ++t) {
    const double* src = signal.samples.data() + t * config.hop;
    double* dst = fft.input();
    for (std::size_t n = 0; n < config.n_fft; ++n) dst[n] = src[n] * window[n];
    fft.power(power.data() + t * bins);
  }
  return power;
}

Spectrogram mel_spectrogram(const AudioSignal& signal, const MelConfig& config) {
  const std::vector<double> power = power_spectrogram(signal, config);
  const MelFilterbank bank = mel_filterbank(config, signal.sample_rate_hz);

  Spectrogram spec;
  spec.frames = power.size() / bank.n_bins;
  spec.n_mels = bank.n_mels;
  spec.values.resize(spec.frames * spec.n_mels);
  const auto& dot = simd::active().dot_f64;
  for (std::size_t t = 0; t < spec.frames; ++t) {
    const double* row = power.data() + t * bank.n_bins;
    for (std::size_t m = 0; m < bank.n_mels; ++m) {
      // Non-negative operands; the clamp only folds -0.0.
      spec.values[t * spec.n_mels + m] = std::max(0.0, dot(row, bank.row(m), bank.n_bins));
    }
  }
  return spec;
}

}  // namespace vidcheck::audio
