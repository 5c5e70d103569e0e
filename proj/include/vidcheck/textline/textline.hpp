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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vidcheck::textline {

struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  friend bool operator==(const Box&, const Box&) = default;
};

struct OcrLine {
  std::string text;
  std::int64_t frame_timestamp_ms = 0;
  Box box;
  double confidence = 0.0;
};

enum class TranscriptSource { ocr, audio };

std::string_view to_string(TranscriptSource source) noexcept;

struct TranscriptLine {
  std::string text;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;

  friend bool operator==(const TranscriptLine&, const TranscriptLine&) = default;
};

struct Transcript {
  std::vector<TranscriptLine> lines;
  TranscriptSource source = TranscriptSource::ocr;

  bool empty() const noexcept { return lines.empty(); }
  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// Empty when the transcript satisfies ordering, span and no-duplicate rules.
std::vector<std::string> transcript_violations(const Transcript& transcript);

// Linear schedule of the detection-box scaling ratio across training epochs.
struct DsrSchedule {
  std::uint32_t total_epochs = 1;
};

// 0.4 + 0.2 * epoch / total_epochs. Throws EpochOutOfRange, InvalidConfig.
double dsr_ratio(const DsrSchedule& schedule, std::uint32_t epoch);

// Center-preserving expansion by (1 + ratio) per side length, origin clipped
// at zero. Throws NonPositiveRatio.
Box rectify_box(const Box& box, double ratio);

// Merge consecutive repeats, then drop blanks.
std::vector<int> collapse_alignment(std::span<const int> path, int blank_index);

// T x V grid of per-step log probabilities, row-major.
struct CtcInstance {
  std::size_t steps = 0;
  std::size_t vocab = 0;
  std::vector<double> log_probs;
  int blank_index = 0;
  std::vector<int> target;

  double log_prob(std::size_t t, int symbol) const {
    return log_probs[t * vocab + static_cast<std::size_t>(symbol)];
  }
};

// Throws InvalidInstance describing the first broken invariant.
void validate(const CtcInstance& instance);

// Minimum number of steps any alignment of the target needs: one per label
// plus one separating blank per adjacent repeated pair.
std::size_t required_steps(std::span<const int> target);

// Negative log of the total probability of all alignments collapsing to the
// target, via the log-space forward recursion. +infinity when infeasible.
double ctc_loss(const CtcInstance& instance);

struct MergeConfig {
  std::int64_t gap_ms = 800;
  double confidence_floor = 0.5;
};

// Trim and collapse runs of whitespace to a single space.
std::string normalize_text(std::string_view text);

// Drops low-confidence lines, normalizes text and fuses consecutive identical
// lines separated by at most gap_ms.
Transcript merge_subtitle_lines(std::span<const OcrLine> lines,
                                const MergeConfig& config);

// The same fusion rule over an existing transcript; idempotent.
Transcript merge_transcript(const Transcript& transcript, std::int64_t gap_ms);

// JSON Lines, one object per line: {"text", "ts_ms", "box": [x,y,w,h], "conf"}.
// Blank lines are skipped. Throws MalformedJsonl naming the line number.
std::vector<OcrLine> parse_ocr_jsonl(std::istream& in);
std::vector<OcrLine> load_ocr_jsonl(const std::filesystem::path& path);
void write_ocr_jsonl(std::ostream& out, std::span<const OcrLine> lines);

}  // namespace vidcheck::textline
