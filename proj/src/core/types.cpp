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

#include "vidcheck/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vidcheck/core/text.hpp"
#include "vidcheck/error.hpp"

namespace vidcheck {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::UnknownLabel: return "UnknownLabel";
    case Errc::NonPositiveDuration: return "NonPositiveDuration";
    case Errc::EmptyRange: return "EmptyRange";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::EpochOutOfRange: return "EpochOutOfRange";
    case Errc::NonPositiveRatio: return "NonPositiveRatio";
    case Errc::InvalidInstance: return "InvalidInstance";
    case Errc::SignalTooShort: return "SignalTooShort";
    case Errc::EmptySignal: return "EmptySignal";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::EmptyCandidates: return "EmptyCandidates";
    case Errc::InvalidSchedule: return "InvalidSchedule";
    case Errc::TemplateInvalid: return "TemplateInvalid";
    case Errc::UnparseableVerdict: return "UnparseableVerdict";
    case Errc::Timeout: return "Timeout";
    case Errc::ServiceError: return "ServiceError";
    case Errc::MalformedResponse: return "MalformedResponse";
    case Errc::PromptTooLarge: return "PromptTooLarge";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::MalformedJsonl: return "MalformedJsonl";
    case Errc::MalformedFile: return "MalformedFile";
    case Errc::UnsupportedIsa: return "UnsupportedIsa";
  }
  return "Unknown";
}

std::string_view to_string(Label label) noexcept {
  switch (label) {
    case Label::real: return "real";
    case Label::fake: return "fake";
    case Label::debunk: return "debunk";
  }
  return "real";
}

Label parse_label(std::string_view text) {
  const std::string lowered = to_lower_ascii(text);
  if (lowered == "real") return Label::real;
  if (lowered == "fake") return Label::fake;
  if (lowered == "debunk" || lowered == "debunking") return Label::debunk;
  throw Error(Errc::UnknownLabel, "'" + std::string(text) + "'");
}

std::vector<std::uint8_t> rgb_to_gray(std::span<const std::uint8_t> rgb) {
  if (rgb.size() % 3 != 0) {
    throw Error(Errc::DimensionMismatch, "RGB buffer length not a multiple of 3");
  }
  std::vector<std::uint8_t> gray(rgb.size() / 3);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    // Integer weights in thousandths keep the half-up rounding exact.
    const std::uint32_t weighted = 299u * rgb[3 * i] + 587u * rgb[3 * i + 1] +
                                   114u * rgb[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>((weighted + 500u) / 1000u);
  }
  return gray;
}

double inferred_duration_s(const VideoRecord& record) {
  if (record.duration_s) return *record.duration_s;
  if (record.frames.empty()) {
    return record.audio ? record.audio->duration_s() : 0.0;
  }
  if (record.frames.size() == 1) {
    return static_cast<double>(record.frames.front().timestamp_ms) / 1000.0 + 1.0;
  }
  const auto first = record.frames.front().timestamp_ms;
  const auto last = record.frames.back().timestamp_ms;
  const double mean_interval_ms = static_cast<double>(last - first) /
                                  static_cast<double>(record.frames.size() - 1);
  return (static_cast<double>(last) + mean_interval_ms) / 1000.0;
}

ValidationResult validate_record(const VideoRecord& record) {
  ValidationResult result;
  auto& out = result.violations;
  if (record.video_id.empty()) out.emplace_back("video_id empty");

  bool decreasing = false;
  bool repeated = false;
  for (std::size_t i = 0; i < record.frames.size(); ++i) {
    const Frame& f = record.frames[i];
    if (f.timestamp_ms < 0) {
      out.push_back("frame " + std::to_string(i) + ": negative timestamp");
    }
    if (static_cast<std::size_t>(f.width) * f.height != f.pixels.size()) {
      out.push_back("frame " + std::to_string(i) + ": width*height != pixel count");
    }
    if (f.width == 0 || f.height == 0) {
      out.push_back("frame " + std::to_string(i) + ": zero dimension");
    }
    if (i > 0) {
      const Frame& prev = record.frames[i - 1];
      if (f.timestamp_ms < prev.timestamp_ms) decreasing = true;
      if (f.timestamp_ms == prev.timestamp_ms) repeated = true;
      if (f.index <= prev.index) {
        out.push_back("frame " + std::to_string(i) + ": index not increasing");
      }
    }
  }
  if (decreasing) out.emplace_back("timestamps not non-decreasing");
  if (repeated) out.emplace_back("timestamps not strictly increasing");

  if (record.metadata.upload_time < 0) out.emplace_back("upload_time negative");
  if (record.metadata.comment_count < 0) out.emplace_back("comment_count negative");
  if (record.metadata.like_count < 0) out.emplace_back("like_count negative");

  if (record.audio) {
    if (record.audio->sample_rate_hz == 0) out.emplace_back("audio sample rate zero");
    const bool in_range = std::all_of(
        record.audio->samples.begin(), record.audio->samples.end(),
        [](double s) { return std::isfinite(s) && std::abs(s) <= 1.0 + 1e-6; });
    if (!in_range) out.emplace_back("audio samples outside [-1, 1]");
  }
  if (record.duration_s && !(*record.duration_s > 0.0)) {
    out.emplace_back("duration not positive");
  }
  return result;
}

ValidationResult validate_corpus(std::span<const VideoRecord> records) {
  ValidationResult result;
  std::set<std::string> seen;
  for (const VideoRecord& r : records) {
    for (auto& v : validate_record(r).violations) {
      result.violations.push_back(r.video_id + ": " + v);
    }
    if (!r.video_id.empty() && !seen.insert(r.video_id).second) {
      result.violations.push_back(r.video_id + ": duplicate video_id");
    }
  }
  return result;
}

}  // namespace vidcheck
