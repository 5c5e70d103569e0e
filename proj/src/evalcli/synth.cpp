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

// Synthetic labeled corpus. Raw engine output is mapped to ranges by hand
// so the files do not depend on the standard library's distributions.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include <nlohmann/json.hpp>

#include "vidcheck/audio/audio.hpp"
#include "vidcheck/backends/mocks.hpp"
#include "vidcheck/evalcli/commands.hpp"

namespace vidcheck::evalcli {

namespace fs = std::filesystem;

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  template <typename T, std::size_t N>
  const T& pick(const std::array<T, N>& items) {
    return items[below(N)];
  }

 private:
  std::mt19937_64 engine_;
};

constexpr std::array<const char*, 8> kSubjects = {
    "Flood", "Bridge collapse", "Street festival", "Wildfire", "Protest", "Storm",
    "Market fire", "Rescue"};
constexpr std::array<const char*, 6> kPlaces = {"downtown", "near the river", "on the highway",
                                                "in the old town", "at the harbor",
                                                "by the school"};
constexpr std::array<const char*, 10> kComments = {
    "is this real?", "saw this on the news", "old footage, not from today",
    "stay safe everyone", "source please", "this was debunked already",
    "my cousin lives there", "edited clip", "shared to family", "wow"};
constexpr std::array<const char*, 6> kCaptions = {
    "BREAKING NEWS", "LIVE", "share before deleted", "official statement",
    "fact check", "eyewitness video"};
constexpr std::array<const char*, 6> kSpeech = {
    "the water is rising fast", "everyone move back now", "this happened this morning",
    "police have closed the road", "we are filming from the roof", "nobody was hurt"};

constexpr std::uint32_t kWidth = 16;
constexpr std::uint32_t kHeight = 12;

std::vector<Frame> make_frames(Rng& rng, std::size_t count) {
  std::vector<Frame> frames;
  const std::size_t scenes = static_cast<std::size_t>(rng.between(1, 4));
  std::vector<std::array<int, 3>> params(scenes);
  for (auto& p : params) p = {static_cast<int>(rng.between(10, 200)),
                              static_cast<int>(rng.between(-6, 6)),
                              static_cast<int>(rng.between(-6, 6))};
  for (std::size_t k = 0; k < count; ++k) {
    const auto& p = params[k * scenes / count];
    Frame f;
    f.index = static_cast<std::uint32_t>(k);
    f.timestamp_ms = static_cast<std::int64_t>(k) * 1000;
    f.width = kWidth;
    f.height = kHeight;
    f.pixels.resize(kWidth * kHeight);
    for (std::uint32_t y = 0; y < kHeight; ++y) {
      for (std::uint32_t x = 0; x < kWidth; ++x) {
        const int v = p[0] + p[1] * static_cast<int>(x) + p[2] * static_cast<int>(y) +
                      static_cast<int>(rng.between(-8, 8));
        f.pixels[y * kWidth + x] = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

AudioSignal make_audio(Rng& rng, std::uint32_t rate) {
  AudioSignal a;
  a.sample_rate_hz = rate;
  const std::size_t n = rate * 2;
  const double f1 = 180.0 + 40.0 * static_cast<double>(rng.below(8));
  const double f2 = 900.0 + 100.0 * static_cast<double>(rng.below(8));
  a.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    a.samples[i] = 0.3 * std::sin(2 * std::numbers::pi * f1 * t) +
                   0.2 * std::sin(2 * std::numbers::pi * f2 * t) + 0.05 * (rng.unit() - 0.5);
  }
  return a;
}

}  // namespace

fs::path cmd_gen_corpus(const GenOptions& o) {
  if (o.per_class == 0) throw Error(Errc::InvalidConfig, "per_class must be >= 1");
  Rng rng(o.seed);
  fs::create_directories(o.out_dir / "frames");
  fs::create_directories(o.out_dir / "audio");
  fs::create_directories(o.out_dir / "ocr");

  std::vector<Label> labels;
  for (Label l : kAllLabels) labels.insert(labels.end(), o.per_class, l);
  for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.below(i)]);

  backends::FixtureSet fixtures;
  const fs::path corpus_path = o.out_dir / "corpus.jsonl";
  std::ofstream corpus(corpus_path, std::ios::binary | std::ios::trunc);
  if (!corpus) throw Error(Errc::FileNotFound, "cannot write " + corpus_path.string());

  for (std::size_t i = 0; i < labels.size(); ++i) {
    char id_buf[32];
    std::snprintf(id_buf, sizeof id_buf, "syn-%04zu", i + 1);
    const std::string id = id_buf;
    CorpusRecord rec;
    rec.video_id = id;
    rec.label = labels[i];
    const std::string subject = rng.pick(kSubjects);
    rec.title = subject + " " + rng.pick(kPlaces);

    const auto frames = make_frames(rng, static_cast<std::size_t>(rng.between(12, 36)));
    rec.frames_path = fs::path("frames") / (id + ".json");
    save_frame_store(o.out_dir / rec.frames_path, frames);

    backends::Fixture fx;
    const bool has_audio = i % 3 != 2;
    if (has_audio) {
      const std::uint32_t rate = i % 2 == 0 ? 16000 : 8000;
      rec.audio_path = fs::path("audio") / (id + ".wav");
      audio::write_wav(o.out_dir / *rec.audio_path, make_audio(rng, rate));
      fx.transcript.push_back({0, 900, rng.pick(kSpeech)});
      fx.transcript.push_back({1000, 1900, rng.pick(kSpeech)});
    }
    if (i % 2 == 0) {
      rec.subtitles_embedded = true;
      rec.ocr_path = fs::path("ocr") / (id + ".jsonl");
      std::vector<textline::OcrLine> lines;
      const std::string caption = rng.pick(kCaptions);
      const auto repeats = rng.between(2, 4);
      for (std::int64_t k = 0; k < repeats; ++k) {
        lines.push_back({caption, k * 500, {2, 8, 12, 3}, 0.6 + 0.39 * rng.unit()});
      }
      lines.push_back({std::string(rng.pick(kCaptions)) + "  ", 5000, {2, 8, 12, 3}, 0.3});
      lines.push_back({rng.pick(kCaptions), 6000, {2, 8, 12, 3}, 0.9});
      std::ofstream ocr(o.out_dir / *rec.ocr_path, std::ios::binary | std::ios::trunc);
      textline::write_ocr_jsonl(ocr, lines);
    }
    if (i % 4 == 1) fx.descriptions[0] = "A handheld shot of a crowded street with people pointing.";

    rec.metadata.upload_time = 1600000000 + rng.between(0, 100000000);
    rec.metadata.author = "user_" + std::to_string(rng.between(100, 999));
    rec.metadata.like_count = rng.between(0, 50000);
    const auto n_comments = rng.between(0, 7);
    for (std::int64_t k = 0; k < n_comments; ++k) rec.metadata.comments.emplace_back(rng.pick(kComments));
    rec.metadata.comment_count = n_comments + rng.between(0, 300);

    fixtures.videos.emplace(id, std::move(fx));
    corpus << to_json(rec).dump() << '\n';
  }
  backends::save_fixtures(fixtures, o.out_dir / "fixtures.json");
  return corpus_path;
}

}  // namespace vidcheck::evalcli
