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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vidcheck {

enum class Label : std::uint8_t { real = 0, fake = 1, debunk = 2 };

inline constexpr std::array<Label, 3> kAllLabels = {Label::real, Label::fake,
                                                   Label::debunk};
inline constexpr std::size_t kLabelCount = kAllLabels.size();

// Lowercase ASCII form: "real", "fake", "debunk".
std::string_view to_string(Label label) noexcept;

// Case-insensitive; accepts "debunking" as an alias of debunk.
// Throws Error(Errc::UnknownLabel) on anything else.
Label parse_label(std::string_view text);

// Maps debunk onto real for corpora scored as binary real/fake.
constexpr Label collapse_to_binary(Label label) noexcept {
  return label == Label::debunk ? Label::real : label;
}

// One decoded grayscale frame. Pixels are row-major, one byte per pixel.
struct Frame {
  std::uint32_t index = 0;
  std::int64_t timestamp_ms = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<std::uint8_t> pixels;

  std::span<const std::uint8_t> view() const noexcept { return pixels; }
};

// Interleaved 8-bit RGB to gray with 0.299R + 0.587G + 0.114B, rounded half up.
std::vector<std::uint8_t> rgb_to_gray(std::span<const std::uint8_t> rgb);

struct Metadata {
  std::int64_t upload_time = 0;  // epoch seconds
  std::int64_t comment_count = 0;
  std::int64_t like_count = 0;
  std::string author;
  std::vector<std::string> comments;  // chronological
};

struct AudioSignal {
  std::vector<double> samples;
  std::uint32_t sample_rate_hz = 0;

  double duration_s() const noexcept {
    return sample_rate_hz == 0 ? 0.0
                               : static_cast<double>(samples.size()) /
                                     static_cast<double>(sample_rate_hz);
  }
};

struct VideoRecord {
  std::string video_id;
  std::string title;
  std::vector<Frame> frames;
  std::optional<AudioSignal> audio;
  bool subtitles_embedded = false;
  Metadata metadata;
  std::optional<Label> gold_label;

  // Explicit duration when the source declares one; otherwise derived
  // from frame timestamps (see inferred_duration_s).
  std::optional<double> duration_s;
};

// Last timestamp plus one mean frame interval; 1 s for a single frame.
double inferred_duration_s(const VideoRecord& record);

struct ValidationResult {
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

// Collects every invariant violation of the record; never throws.
ValidationResult validate_record(const VideoRecord& record);

// Record-level checks plus id uniqueness across the corpus. Violations are
// prefixed with the offending video id.
ValidationResult validate_corpus(std::span<const VideoRecord> records);

}  // namespace vidcheck
