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

// Corpus JSONL, one record per line:
//
//   {"video_id": "v1", "title": "...", "label": "fake",
//    "frames_path": "frames/v1.json", "audio_path": "audio/v1.wav",
//    "audio_rate_hz": 16000, "ocr_path": "ocr/v1.jsonl",
//    "subtitles_embedded": true, "duration_s": 12.0,
//    "metadata": {"upload_time": 1700000000, "author": "...",
//                 "like_count": 10, "comment_count": 2, "comments": ["..."]}}
//
// Only video_id and frames_path are required. Paths are relative to the
// directory holding the corpus file.
//
// Frame store JSON:
//
//   {"v": 1, "width": 16, "height": 12, "channels": 1,
//    "frames": [{"ts_ms": 0, "pixels": [0, 255, ...]}, ...]}
//
// channels is 1 (gray) or 3 (interleaved RGB, converted to gray on load).

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vidcheck/core/types.hpp"
#include "vidcheck/textline/textline.hpp"

namespace vidcheck::evalcli {

struct CorpusRecord {
  std::size_t line = 0;  // 1-based line in the corpus file
  std::string video_id;
  std::string title;
  std::optional<Label> label;
  std::filesystem::path frames_path;
  std::optional<std::filesystem::path> audio_path;
  std::uint32_t audio_rate_hz = 0;  // raw .f32 audio only
  std::optional<std::filesystem::path> ocr_path;
  bool subtitles_embedded = false;
  std::optional<double> duration_s;
  Metadata metadata;
  std::vector<std::string> flags;  // unresolvable paths, filled at load time
};

struct CorpusIssue {
  std::size_t line = 0;
  std::string message;
};

struct Corpus {
  std::filesystem::path base_dir;
  std::vector<CorpusRecord> records;
  std::vector<CorpusIssue> issues;
};

enum class LoadMode { strict, report };

// Throws Error(FileNotFound) when the file is missing. In strict mode the
// first bad line throws Error(MalformedJsonl) naming every bad line number;
// in report mode bad lines land in Corpus::issues and the rest load in order.
Corpus load_corpus(const std::filesystem::path& path, LoadMode mode = LoadMode::strict);
Corpus parse_corpus(std::istream& in, const std::filesystem::path& base_dir,
                    LoadMode mode = LoadMode::strict);

CorpusRecord record_from_json(const nlohmann::json& j);  // throws MalformedJsonl
nlohmann::json to_json(const CorpusRecord& record);

std::vector<Frame> load_frame_store(const std::filesystem::path& path);
void save_frame_store(const std::filesystem::path& path, std::span<const Frame> frames);

struct LoadedRecord {
  VideoRecord video;
  std::vector<textline::OcrLine> ocr;
};

// Reads the frame store, audio and OCR files a record points to.
LoadedRecord materialize(const CorpusRecord& record, const std::filesystem::path& base_dir);

}  // namespace vidcheck::evalcli
