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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "vidcheck/audio/audio.hpp"
#include "vidcheck/error.hpp"

namespace vidcheck::audio {
namespace {

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::InvalidConfig;
}

AudioSignal random_signal(std::mt19937_64& rng, std::size_t n, std::uint32_t rate = 16000) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AudioSignal s;
  s.sample_rate_hz = rate;
  s.samples.resize(n);
  for (auto& x : s.samples) x = u(rng);
  return s;
}

TEST(FrameCount, Examples) {
  MelConfig c;
  c.n_fft = 256;
  c.hop = 128;
  EXPECT_EQ(frame_count(256, c), 1u);
  EXPECT_EQ(frame_count(256 + 128, c), 2u);
  EXPECT_EQ(frame_count(1024, c), 7u);
  EXPECT_EQ(code_of([&] { frame_count(255, c); }), Errc::SignalTooShort);
}

TEST(Preprocess, IdentityAtTargetRate) {
  AudioSignal s{{0.0, 0.5, -1.0, 0.25}, 16000};
  const auto out = preprocess_audio(s);
  EXPECT_EQ(out.sample_rate_hz, 16000u);
  EXPECT_EQ(out.samples, s.samples);
}

TEST(Preprocess, UpsampleDoubleRateGives2NMinus1) {
  std::mt19937_64 rng(31);
  for (std::size_t n : {1u, 2u, 5u, 800u}) {
    auto s = random_signal(rng, n, 8000);
    const auto out = preprocess_audio(s);
    EXPECT_EQ(out.sample_rate_hz, 16000u);
    ASSERT_EQ(out.samples.size(), 2 * n - 1) << n;
    double peak = 0.0;
    for (double v : s.samples) peak = std::max(peak, std::abs(v));
    // Even outputs hit the original samples; odd ones are midpoints.
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(out.samples[2 * i], s.samples[i] / peak, 1e-12);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      EXPECT_NEAR(out.samples[2 * i + 1], 0.5 * (s.samples[i] + s.samples[i + 1]) / peak, 1e-12);
    }
  }
}

TEST(Preprocess, ZeroSignalStaysZero) {
  AudioSignal s{std::vector<double>(400, 0.0), 8000};
  const auto out = preprocess_audio(s);
  EXPECT_EQ(out.samples.size(), 799u);
  for (double v : out.samples) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(code_of([] { preprocess_audio(AudioSignal{{}, 16000}); }), Errc::EmptySignal);
}

TEST(Preprocess, PeakNormalizedAndIdempotent) {
  std::mt19937_64 rng(32);
  for (std::uint32_t rate : {8000u, 11025u, 16000u, 22050u, 44100u}) {
    auto s = random_signal(rng, 3000, rate);
    for (auto& v : s.samples) v *= 0.3;
    const auto once = preprocess_audio(s);
    double peak = 0.0;
    for (double v : once.samples) peak = std::max(peak, std::abs(v));
    EXPECT_NEAR(peak, 1.0, 1e-12);
    const auto twice = preprocess_audio(once);
    ASSERT_EQ(twice.samples.size(), once.samples.size());
    for (std::size_t i = 0; i < once.samples.size(); ++i) {
      ASSERT_NEAR(twice.samples[i], once.samples[i], 1e-12);
    }
  }
}

TEST(Mel, ZeroSignalGivesZeros) {
  MelConfig c;
  const auto spec = mel_spectrogram(AudioSignal{std::vector<double>(2000, 0.0), 16000}, c);
  EXPECT_EQ(spec.frames, frame_count(2000, c));
  for (double v : spec.values) EXPECT_EQ(v, 0.0);
}

TEST(Mel, DcSignalLandsInLowestBins) {
  MelConfig c;
  c.n_fft = 256;
  c.hop = 256;
  c.n_mels = 10;
  c.window = Window::rectangular;
  const AudioSignal dc{std::vector<double>(512, 1.0), 16000};
  const auto spec = mel_spectrogram(dc, c);
  const auto bank = mel_filterbank(c, 16000);
  const double n2 = 256.0 * 256.0;
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t m = 0; m < c.n_mels; ++m) {
      // Only bin 0 carries energy (N^2), so each band sees N^2 h_m(0).
      EXPECT_NEAR(spec.at(t, m), n2 * bank.row(m)[0], 1e-6 * n2) << m;
    }
  }
  // With f_min = 0 every filter is zero at DC, so the whole spectrogram is 0.
  for (double v : spec.values) EXPECT_NEAR(v, 0.0, 1e-6);

}

TEST(Mel, MatchesDirectDftOracle) {
  std::mt19937_64 rng(33);
  for (Window w : {Window::hann, Window::rectangular}) {
    MelConfig c;
    c.n_fft = 64;
    c.hop = 32;
    c.n_mels = 8;
    c.window = w;
    const auto s = random_signal(rng, 64 * 3);
    const auto spec = mel_spectrogram(s, c);
    const auto want = oracle::mel_direct(s.samples, 16000, c);
    ASSERT_EQ(spec.values.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_NEAR(spec.values[i], want[i], 1e-6 * std::max(1.0, want[i])) << i;
    }
  }
}

TEST(Mel, TotalFilteredEnergyOnA64SampleSignal) {
  std::mt19937_64 rng(34);
  MelConfig c;
  c.n_fft = 64;
  c.hop = 64;
  c.n_mels = 6;
  const auto s = random_signal(rng, 64);
  const auto spec = mel_spectrogram(s, c);
  const auto want = oracle::mel_direct(s.samples, 16000, c);
  double got_total = 0.0, want_total = 0.0;
  for (double v : spec.values) got_total += v;
  for (double v : want) want_total += v;
  EXPECT_NEAR(got_total, want_total, 1e-6);
}

TEST(Mel, NonNegativeAndQuadraticInScale) {
  std::mt19937_64 rng(35);
  MelConfig c;
  c.n_fft = 128;
  c.hop = 64;
  c.n_mels = 12;
  for (int i = 0; i < 50; ++i) {
    auto s = random_signal(rng, 128 + rng() % 600);
    const auto a = mel_spectrogram(s, c);
    for (double v : a.values) ASSERT_GE(v, 0.0);
    const double k = 0.01 + (rng() % 1000) / 100.0;
    auto scaled = s;
    for (auto& v : scaled.samples) v *= k;
    const auto b = mel_spectrogram(scaled, c);
    for (std::size_t j = 0; j < a.values.size(); ++j) {
      ASSERT_NEAR(b.values[j], k * k * a.values[j], 1e-9 * std::max(1e-300, k * k * a.values[j]) + 1e-18);
    }
  }
}

TEST(Mel, FilterbankRowsAndCenters) {
  for (std::size_t mels : {1u, 10u, 40u, 64u}) {
    MelConfig c;
    c.n_mels = mels;
    const auto bank = mel_filterbank(c, 16000);
    ASSERT_EQ(bank.centers_hz.size(), mels);
    for (std::size_t m = 0; m < mels; ++m) {
      double row_max = 0.0;
      for (std::size_t k = 0; k < bank.n_bins; ++k) {
        EXPECT_GE(bank.row(m)[k], 0.0);
        EXPECT_LE(bank.row(m)[k], 1.0);
        row_max = std::max(row_max, bank.row(m)[k]);
      }
      EXPECT_GT(row_max, 0.0) << m;
      if (m > 0) EXPECT_GT(bank.centers_hz[m], bank.centers_hz[m - 1]);
    }
  }
  MelConfig dense;
  dense.n_fft = 64;
  dense.n_mels = 200;
  EXPECT_EQ(code_of([&] { mel_filterbank(dense, 16000); }), Errc::InvalidConfig);
}

TEST(Mel, ScaleRoundTrip) {
  for (double f : {0.0, 100.0, 700.0, 4000.0, 8000.0}) EXPECT_NEAR(mel_to_hz(hz_to_mel(f)), f, 1e-9);
  EXPECT_NEAR(hz_to_mel(700.0), 2595.0 * std::log10(2.0), 1e-9);
}

TEST(Mel, ConfigValidation) {
  MelConfig c;
  c.n_fft = 500;
  EXPECT_EQ(code_of([&] { validate(c, 16000); }), Errc::InvalidConfig);
  c = MelConfig{};
  c.hop = c.n_fft + 1;
  EXPECT_EQ(code_of([&] { validate(c, 16000); }), Errc::InvalidConfig);
  c = MelConfig{};
  c.f_max_hz = 9000;
  EXPECT_EQ(code_of([&] { validate(c, 16000); }), Errc::InvalidConfig);
  c = MelConfig{};
  c.f_min_hz = 8000;
  EXPECT_EQ(code_of([&] { validate(c, 16000); }), Errc::InvalidConfig);
  EXPECT_EQ(code_of([] { mel_spectrogram(AudioSignal{std::vector<double>(100, 0.1), 16000}, {}); }),
            Errc::SignalTooShort);
}

TEST(Wav, RoundTripWithinQuantization) {
  std::mt19937_64 rng(36);
  const auto s = random_signal(rng, 1000, 8000);
  const auto path = std::filesystem::temp_directory_path() / "vidcheck_audio_test.wav";
  write_wav(path, s);
  const auto back = read_wav(path);
  EXPECT_EQ(back.sample_rate_hz, 8000u);
  ASSERT_EQ(back.samples.size(), s.samples.size());
  for (std::size_t i = 0; i < s.samples.size(); ++i) EXPECT_NEAR(back.samples[i], s.samples[i], 1.0 / 32767);
  EXPECT_EQ(load_audio(path, 0).samples.size(), 1000u);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { read_wav(path); }), Errc::FileNotFound);

  const auto junk = std::filesystem::temp_directory_path() / "vidcheck_audio_junk.wav";
  std::ofstream(junk) << "not a wav file at all, not even close";
  EXPECT_EQ(code_of([&] { read_wav(junk); }), Errc::MalformedFile);
  std::filesystem::remove(junk);
}

TEST(Wav, RawFloat32) {
  const auto path = std::filesystem::temp_directory_path() / "vidcheck_audio_test.f32";
  const float data[3] = {0.5f, -0.25f, 1.0f};
  std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(data), sizeof data);
  const auto s = load_audio(path, 22050);
  EXPECT_EQ(s.sample_rate_hz, 22050u);
  EXPECT_EQ(s.samples, (std::vector<double>{0.5, -0.25, 1.0}));
  std::filesystem::remove(path);
}

TEST(Pcm16, Encoding) {
  const auto b = to_pcm16(AudioSignal{{1.0, -1.0, 0.0}, 16000});
  EXPECT_EQ(b, (std::vector<std::uint8_t>{0xff, 0x7f, 0x01, 0x80, 0x00, 0x00}));
}

}  // namespace
}  // namespace vidcheck::audio
