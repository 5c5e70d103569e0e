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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "vidcheck/audio/audio.hpp"
#include "vidcheck/error.hpp"

namespace vidcheck::audio {
namespace {

std::vector<std::uint8_t> ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t U32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}
std::uint16_t U16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

}  // namespace

AudioSignal preprocess_audio(const AudioSignal& signal, std::uint32_t target_rate) {
  if (signal.samples.empty()) throw Error(Errc::EmptySignal, "no samples");
  if (signal.sample_rate_hz == 0 || target_rate == 0) {
    throw Error(Errc::InvalidConfig, "sample rates must be positive");
  }
  AudioSignal out;
  out.sample_rate_hz = target_rate;
  const auto& in = signal.samples;
  if (signal.sample_rate_hz == target_rate) {
    out.samples = in;
  } else {
    // Output sample j sits at input position j * rate_in / rate_out.
    const std::uint64_t rate_in = signal.sample_rate_hz;
    const std::uint64_t rate_out = target_rate;
    const std::uint64_t out_len = (in.size() - 1) * rate_out / rate_in + 1;
    out.samples.resize(out_len);
    for (std::uint64_t j = 0; j < out_len; ++j) {
      const std::uint64_t numer = j * rate_in;
      const std::uint64_t i0 = numer / rate_out;
      const double frac = static_cast<double>(numer % rate_out) / static_cast<double>(rate_out);
      const double a = in[i0];
      const double b = i0 + 1 < in.size() ? in[i0 + 1] : a;
      out.samples[j] = frac == 0.0 ? a : a + (b - a) * frac;
    }
  }
  double peak = 0.0;
  for (double s : out.samples) peak = std::max(peak, std::abs(s));
  if (peak > 1e-12 && peak != 1.0) {
    for (double& s : out.samples) s /= peak;
  }
  return out;
}

std::vector<std::uint8_t> to_pcm16(const AudioSignal& signal) {
  std::vector<std::uint8_t> out;
  out.reserve(signal.samples.size() * 2);
  for (double s : signal.samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
    PutU16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

AudioSignal read_wav(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = ReadAll(path);
  const auto bad = [&](const std::string& what) {
    throw Error(Errc::MalformedFile, path.string() + ": " + what);
  };
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    bad("not a RIFF/WAVE file");
  }
  std::uint16_t channels = 0;
  std::uint16_t bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = U32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) bad("truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) bad("short fmt chunk");
      if (U16(bytes.data() + body) != 1) bad("only PCM is supported");
      channels = U16(bytes.data() + body + 2);
      rate = U32(bytes.data() + body + 4);
      bits = U16(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) bad("data chunk before fmt chunk");
      if (bits != 16) bad("only 16-bit samples are supported");
      if (channels == 0 || rate == 0) bad("zero channels or rate");
      const std::size_t frame_bytes = 2u * channels;
      const std::size_t frames = size / frame_bytes;
      AudioSignal signal;
      signal.sample_rate_hz = rate;
      signal.samples.resize(frames);
      for (std::size_t f = 0; f < frames; ++f) {
        double acc = 0.0;
        for (std::size_t c = 0; c < channels; ++c) {
          const auto v = static_cast<std::int16_t>(U16(bytes.data() + body + f * frame_bytes + 2 * c));
          acc += std::max(-1.0, static_cast<double>(v) / 32767.0);
        }
        signal.samples[f] = acc / channels;
      }
      return signal;
    }
    pos = body + size + (size & 1u);
  }
  bad("no data chunk");
  return {};
}

void write_wav(const std::filesystem::path& path, const AudioSignal& signal) {
  const std::vector<std::uint8_t> pcm = to_pcm16(signal);
  std::vector<std::uint8_t> out;
  out.reserve(44 + pcm.size());
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(out, static_cast<std::uint32_t>(36 + pcm.size()));
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(out, 16);
  PutU16(out, 1);  // PCM
  PutU16(out, 1);  // mono
  PutU32(out, signal.sample_rate_hz);
  PutU32(out, signal.sample_rate_hz * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(out, static_cast<std::uint32_t>(pcm.size()));
  out.insert(out.end(), pcm.begin(), pcm.end());

  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::FileNotFound, path.string());
  file.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

AudioSignal read_raw_f32(const std::filesystem::path& path, std::uint32_t sample_rate_hz) {
  if (sample_rate_hz == 0) throw Error(Errc::InvalidConfig, "raw audio needs a declared rate");
  const std::vector<std::uint8_t> bytes = ReadAll(path);
  if (bytes.size() % 4 != 0) {
    throw Error(Errc::MalformedFile, path.string() + ": length not a multiple of 4");
  }
  AudioSignal signal;
  signal.sample_rate_hz = sample_rate_hz;
  signal.samples.resize(bytes.size() / 4);
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    signal.samples[i] = static_cast<double>(std::bit_cast<float>(U32(bytes.data() + 4 * i)));
  }
  return signal;
}

AudioSignal load_audio(const std::filesystem::path& path, std::uint32_t declared_rate_hz) {
  const std::string ext = path.extension().string();
  if (ext == ".wav" || ext == ".WAV") return read_wav(path);
  if (ext == ".f32" || ext == ".raw") return read_raw_f32(path, declared_rate_hz);
  throw Error(Errc::MalformedFile, path.string() + ": unknown audio extension");
}

}  // namespace vidcheck::audio
