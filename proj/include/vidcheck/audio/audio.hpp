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

// Audio conditioning to the 16 kHz transcription contract and Mel features.
//
// Framing conventions (fixed, so other implementations can reproduce the
// numbers exactly):
//   * frames start at multiples of `hop`; no padding; a trailing partial
//     frame is dropped;
//   * window is periodic Hann, w[n] = 0.5 - 0.5 cos(2 pi n / n_fft), or
//     rectangular;
//   * power spectrum is the one-sided |X(k)|^2 for k = 0 .. n_fft / 2 of the
//     unnormalized DFT X(k) = sum_n w[n] x[n] e^{-2 pi i k n / n_fft};
//   * mel scale is HTK, mel(f) = 2595 log10(1 + f / 700); n_mels + 2 points
//     are spaced evenly in mel between f_min and f_max, and filter m is the
//     unit-peak triangle over points (m, m + 1, m + 2), evaluated at bin
//     frequencies k * rate / n_fft, zero at both feet.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "vidcheck/core/types.hpp"

namespace vidcheck::audio {

inline constexpr std::uint32_t kTargetRateHz = 16000;

enum class Window { hann, rectangular };

struct MelConfig {
  std::size_t n_fft = 512;
  std::size_t hop = 160;
  std::size_t n_mels = 40;
  double f_min_hz = 0.0;
  double f_max_hz = 8000.0;
  Window window = Window::hann;
};

// Throws InvalidConfig for a config that cannot be used at this rate.
void validate(const MelConfig& config, std::uint32_t sample_rate_hz);

struct MelFilterbank {
  std::size_t n_mels = 0;
  std::size_t n_bins = 0;  // n_fft / 2 + 1
  std::vector<double> weights;     // n_mels x n_bins, row-major
  std::vector<double> centers_hz;  // strictly increasing

  const double* row(std::size_t m) const { return weights.data() + m * n_bins; }
};

// Throws InvalidConfig, including when some filter has no bin inside its
// support (too many mels for the FFT resolution).
MelFilterbank mel_filterbank(const MelConfig& config, std::uint32_t sample_rate_hz);

double hz_to_mel(double hz) noexcept;
double mel_to_hz(double mel) noexcept;

struct Spectrogram {
  std::size_t frames = 0;
  std::size_t n_mels = 0;
  std::vector<double> values;  // frames x n_mels, row-major

  double at(std::size_t t, std::size_t m) const { return values[t * n_mels + m]; }
};

// 1 + floor((signal_len - n_fft) / hop). Throws SignalTooShort.
std::size_t frame_count(std::size_t signal_len, const MelConfig& config);

// Linear-interpolation resample to target_rate, then peak normalization to 1
// (signals with peak <= 1e-12 are left as they are). Throws EmptySignal.
AudioSignal preprocess_audio(const AudioSignal& signal,
                             std::uint32_t target_rate = kTargetRateHz);

// Per-frame windowed power spectrum, n_frames x (n_fft / 2 + 1).
std::vector<double> power_spectrogram(const AudioSignal& signal, const MelConfig& config);

// Throws SignalTooShort, InvalidConfig.
Spectrogram mel_spectrogram(const AudioSignal& signal, const MelConfig& config);

// 16-bit signed little-endian PCM. Multi-channel input is averaged to mono.
// Throws FileNotFound, MalformedFile.
AudioSignal read_wav(const std::filesystem::path& path);
void write_wav(const std::filesystem::path& path, const AudioSignal& signal);

// Headerless little-endian float32 samples at a declared rate.
AudioSignal read_raw_f32(const std::filesystem::path& path, std::uint32_t sample_rate_hz);

// Loads by extension: .wav, or .f32/.raw with declared_rate_hz.
AudioSignal load_audio(const std::filesystem::path& path, std::uint32_t declared_rate_hz);

// Signed 16-bit little-endian bytes, as carried on the transcription wire.
std::vector<std::uint8_t> to_pcm16(const AudioSignal& signal);

}  // namespace vidcheck::audio
