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

#include "vidcheck/evalcli/corpus.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vidcheck/audio/audio.hpp"
#include "vidcheck/core/text.hpp"
#include "vidcheck/error.hpp"

namespace vidcheck::evalcli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::int64_t non_negative(const json& j, const char* key) {
  const auto v = j.value(key, std::int64_t{0});
  if (v < 0) throw Error(Errc::MalformedJsonl, std::string(key) + " is negative");
  return v;
}

}  // namespace

CorpusRecord record_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::MalformedJsonl, "record is not an object");
  try {
    CorpusRecord r;
    r.video_id = j.at("video_id").get<std::string>();
    if (r.video_id.empty()) throw Error(Errc::MalformedJsonl, "video_id is empty");
    r.title = j.value("title", std::string());
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
      try {
        r.label = parse_label(it->get<std::string>());
      } catch (const Error& e) {
        throw Error(Errc::MalformedJsonl, e.what());
      }
    }
    r.frames_path = j.at("frames_path").get<std::string>();
    if (auto it = j.find("audio_path"); it != j.end() && !it->is_null()) {
      r.audio_path = fs::path(it->get<std::string>());
    }
    r.audio_rate_hz = j.value("audio_rate_hz", std::uint32_t{0});
    if (auto it = j.find("ocr_path"); it != j.end() && !it->is_null()) {
      r.ocr_path = fs::path(it->get<std::string>());
    }
    r.subtitles_embedded = j.value("subtitles_embedded", false);
    if (auto it = j.find("duration_s"); it != j.end() && !it->is_null()) {
      r.duration_s = it->get<double>();
      if (!(*r.duration_s > 0.0)) throw Error(Errc::MalformedJsonl, "duration_s must be > 0");
    }
    if (auto it = j.find("metadata"); it != j.end()) {
      const json& m = *it;
      r.metadata.upload_time = m.value("upload_time", std::int64_t{0});
      r.metadata.author = m.value("author", std::string());
      r.metadata.like_count = non_negative(m, "like_count");
      r.metadata.comment_count = non_negative(m, "comment_count");
      r.metadata.comments = m.value("comments", std::vector<std::string>{});
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedJsonl, e.what());
  }
}

json to_json(const CorpusRecord& r) {
  json j{{"video_id", r.video_id}, {"title", r.title}};
  if (r.label) j["label"] = to_string(*r.label);
  j["frames_path"] = r.frames_path.generic_string();
  if (r.audio_path) j["audio_path"] = r.audio_path->generic_string();
  if (r.audio_rate_hz) j["audio_rate_hz"] = r.audio_rate_hz;
  if (r.ocr_path) j["ocr_path"] = r.ocr_path->generic_string();
  j["subtitles_embedded"] = r.subtitles_embedded;
  if (r.duration_s) j["duration_s"] = *r.duration_s;
  j["metadata"] = {{"upload_time", r.metadata.upload_time},
                   {"author", r.metadata.author},
                   {"like_count", r.metadata.like_count},
                   {"comment_count", r.metadata.comment_count},
                   {"comments", r.metadata.comments}};
  return j;
}

Corpus parse_corpus(std::istream& in, const fs::path& base_dir, LoadMode mode) {
  Corpus corpus;
  corpus.base_dir = base_dir;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (collapse_whitespace(raw).empty()) continue;
    try {
      CorpusRecord r = record_from_json(json::parse(raw));
      r.line = line_no;
      auto check = [&](const fs::path& p, const char* what) {
        if (!fs::exists(base_dir / p)) r.flags.push_back(std::string(what) + " not found: " + p.generic_string());
      };
      check(r.frames_path, "frames_path");
      if (r.audio_path) check(*r.audio_path, "audio_path");
      if (r.ocr_path) check(*r.ocr_path, "ocr_path");
      corpus.records.push_back(std::move(r));
    } catch (const json::exception& e) {
      corpus.issues.push_back({line_no, e.what()});
    } catch (const Error& e) {
      corpus.issues.push_back({line_no, e.what()});
    }
  }
  if (mode == LoadMode::strict && !corpus.issues.empty()) {
    std::ostringstream msg;
    msg << "bad line(s)";
    for (const auto& issue : corpus.issues) msg << ' ' << issue.line;
    msg << ": " << corpus.issues.front().message;
    throw Error(Errc::MalformedJsonl, msg.str());
  }
  return corpus;
}

Corpus load_corpus(const fs::path& path, LoadMode mode) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  return parse_corpus(in, path.parent_path(), mode);
}

std::vector<Frame> load_frame_store(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  try {
    const json j = json::parse(in);
    if (j.at("v").get<int>() != 1) throw Error(Errc::MalformedFile, "frame store: unsupported v");
    const auto w = j.at("width").get<std::uint32_t>();
    const auto h = j.at("height").get<std::uint32_t>();
    const auto channels = j.value("channels", 1);
    if (channels != 1 && channels != 3) {
      throw Error(Errc::MalformedFile, "frame store: channels must be 1 or 3");
    }
    const std::size_t expect = static_cast<std::size_t>(w) * h * static_cast<std::size_t>(channels);
    std::vector<Frame> frames;
    std::uint32_t index = 0;
    for (const auto& f : j.at("frames")) {
      auto px = f.at("pixels").get<std::vector<std::uint8_t>>();
      if (px.size() != expect) {
        throw Error(Errc::MalformedFile, path.string() + ": frame " + std::to_string(index) +
                                             " has " + std::to_string(px.size()) + " values, want " +
                                             std::to_string(expect));
      }
      Frame frame;
      frame.index = index++;
      frame.timestamp_ms = f.at("ts_ms").get<std::int64_t>();
      frame.width = w;
      frame.height = h;
      frame.pixels = channels == 3 ? rgb_to_gray(px) : std::move(px);
      frames.push_back(std::move(frame));
    }
    return frames;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedFile, path.string() + ": " + e.what());
  }
}

void save_frame_store(const fs::path& path, std::span<const Frame> frames) {
  json list = json::array();
  for (const Frame& f : frames) list.push_back({{"ts_ms", f.timestamp_ms}, {"pixels", f.pixels}});
  const json j{{"v", 1},
               {"width", frames.empty() ? 0u : frames.front().width},
               {"height", frames.empty() ? 0u : frames.front().height},
               {"channels", 1},
               {"frames", std::move(list)}};
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, "cannot write " + path.string());
  out << j.dump() << '\n';
}

LoadedRecord materialize(const CorpusRecord& r, const fs::path& base_dir) {
  LoadedRecord out;
  VideoRecord& v = out.video;
  v.video_id = r.video_id;
  v.title = r.title;
  v.frames = load_frame_store(base_dir / r.frames_path);
  if (r.audio_path) v.audio = audio::load_audio(base_dir / *r.audio_path, r.audio_rate_hz);
  v.subtitles_embedded = r.subtitles_embedded;
  v.metadata = r.metadata;
  v.gold_label = r.label;
  v.duration_s = r.duration_s;
  if (r.ocr_path) out.ocr = textline::load_ocr_jsonl(base_dir / *r.ocr_path);
  return out;
}

}  // namespace vidcheck::evalcli
