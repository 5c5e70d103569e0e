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
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "vidcheck/core/text.hpp"
#include "vidcheck/error.hpp"
#include "vidcheck/textline/textline.hpp"

namespace vidcheck::textline {

std::string_view to_string(TranscriptSource source) noexcept {
  return source == TranscriptSource::ocr ? "ocr" : "audio";
}

std::vector<std::string> transcript_violations(const Transcript& transcript) {
  std::vector<std::string> out;
  const auto& lines = transcript.lines;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].start_ms > lines[i].end_ms) {
      out.push_back("line " + std::to_string(i) + ": start after end");
    }
    if (i == 0) continue;
    if (lines[i].start_ms < lines[i - 1].start_ms) {
      out.push_back("line " + std::to_string(i) + ": not sorted by start");
    }
    if (lines[i].text == lines[i - 1].text && lines[i].start_ms <= lines[i - 1].end_ms) {
      out.push_back("line " + std::to_string(i) + ": duplicate of previous line");
    }
  }
  return out;
}

double dsr_ratio(const DsrSchedule& schedule, std::uint32_t epoch) {
  if (schedule.total_epochs == 0) {
    throw Error(Errc::InvalidConfig, "total_epochs must be >= 1");
  }
  if (epoch > schedule.total_epochs) {
    throw Error(Errc::EpochOutOfRange, std::to_string(epoch) + " > " +
                                           std::to_string(schedule.total_epochs));
  }
  return 0.4 + 0.2 * static_cast<double>(epoch) /
                   static_cast<double>(schedule.total_epochs);
}

Box rectify_box(const Box& box, double ratio) {
  if (!(ratio > 0.0)) {
    throw Error(Errc::NonPositiveRatio, std::to_string(ratio));
  }
  Box out;
  out.w = box.w * (1.0 + ratio);
  out.h = box.h * (1.0 + ratio);
  out.x = std::max(0.0, box.x - (out.w - box.w) / 2.0);
  out.y = std::max(0.0, box.y - (out.h - box.h) / 2.0);
  return out;
}

std::string normalize_text(std::string_view text) { return collapse_whitespace(text); }

Transcript merge_transcript(const Transcript& transcript, std::int64_t gap_ms) {
  std::vector<TranscriptLine> lines;
  lines.reserve(transcript.lines.size());
  for (const auto& line : transcript.lines) {
    std::string text = normalize_text(line.text);
    if (!text.empty()) lines.push_back({std::move(text), line.start_ms, line.end_ms});
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const TranscriptLine& a, const TranscriptLine& b) {
                     return a.start_ms < b.start_ms;
                   });

  Transcript out;
  out.source = transcript.source;
  for (auto& line : lines) {
    if (!out.lines.empty()) {
      TranscriptLine& last = out.lines.back();
      if (last.text == line.text && line.start_ms - last.end_ms <= gap_ms) {
        last.end_ms = std::max(last.end_ms, line.end_ms);
        continue;
      }
    }
    out.lines.push_back(std::move(line));
  }
  return out;
}

Transcript merge_subtitle_lines(std::span<const OcrLine> lines,
                                const MergeConfig& config) {
  Transcript raw;
  raw.source = TranscriptSource::ocr;
  for (const OcrLine& line : lines) {
    if (line.confidence < config.confidence_floor) continue;
    raw.lines.push_back({line.text, line.frame_timestamp_ms, line.frame_timestamp_ms});
  }
  return merge_transcript(raw, config.gap_ms);
}

std::vector<OcrLine> parse_ocr_jsonl(std::istream& in) {
  std::vector<OcrLine> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (normalize_text(raw).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(raw);
      OcrLine line;
      line.text = j.at("text").get<std::string>();
      line.frame_timestamp_ms = j.at("ts_ms").get<std::int64_t>();
      const auto& box = j.at("box");
      if (!box.is_array() || box.size() != 4) throw std::invalid_argument("box must be [x,y,w,h]");
      line.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                  box[3].get<double>()};
      line.confidence = j.at("conf").get<double>();
      if (line.box.x < 0 || line.box.y < 0 || !(line.box.w > 0) || !(line.box.h > 0)) {
        throw std::invalid_argument("box must have x,y >= 0 and w,h > 0");
      }
      if (!(line.confidence >= 0.0 && line.confidence <= 1.0)) {
        throw std::invalid_argument("conf outside [0, 1]");
      }
      out.push_back(std::move(line));
    } catch (const std::exception& e) {
      throw Error(Errc::MalformedJsonl, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<OcrLine> load_ocr_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  return parse_ocr_jsonl(in);
}

void write_ocr_jsonl(std::ostream& out, std::span<const OcrLine> lines) {
  for (const OcrLine& line : lines) {
    nlohmann::json j{{"text", line.text},
                     {"ts_ms", line.frame_timestamp_ms},
                     {"box", {line.box.x, line.box.y, line.box.w, line.box.h}},
                     {"conf", line.confidence}};
    out << j.dump() << '\n';
  }
}

}  // namespace vidcheck::textline
