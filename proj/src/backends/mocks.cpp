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

#include "vidcheck/backends/mocks.hpp"

#include <cstdio>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "vidcheck/prompt/prompt.hpp"

namespace vidcheck::backends {

using nlohmann::json;

const Fixture* FixtureSet::find(const std::string& video_id) const {
  const auto it = videos.find(video_id);
  return it == videos.end() ? nullptr : &it->second;
}

FixtureSet fixtures_from_json(const json& j) {
  try {
    if (j.at("v").get<int>() != 1) throw Error(Errc::MalformedFile, "fixtures: unsupported v");
    FixtureSet out;
    if (!j.at("videos").is_object()) throw Error(Errc::MalformedFile, "fixtures: videos must be an object");
    for (const auto& [id, v] : j.at("videos").items()) {
      if (!v.is_object()) throw Error(Errc::MalformedFile, "fixtures: entry " + id + " must be an object");
      Fixture f;
      if (auto it = v.find("transcript"); it != v.end()) {
        for (const auto& s : *it) {
          f.transcript.push_back({s.at("start_ms").get<std::int64_t>(),
                                  s.at("end_ms").get<std::int64_t>(),
                                  s.at("text").get<std::string>()});
        }
      }
      if (auto it = v.find("descriptions"); it != v.end()) {
        for (const auto& [k, text] : it->items()) {
          f.descriptions[std::stoul(k)] = text.get<std::string>();
        }
      }
      if (auto it = v.find("classify"); it != v.end()) f.classify_output = it->get<std::string>();
      out.videos.emplace(id, std::move(f));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedFile, std::string("fixtures: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(Errc::MalformedFile, std::string("fixtures: ") + e.what());
  }
}

json to_json(const FixtureSet& fixtures) {
  json videos = json::object();
  for (const auto& [id, f] : fixtures.videos) {
    json v = json::object();
    if (!f.transcript.empty()) {
      json t = json::array();
      for (const auto& s : f.transcript) {
        t.push_back({{"start_ms", s.start_ms}, {"end_ms", s.end_ms}, {"text", s.text}});
      }
      v["transcript"] = std::move(t);
    }
    if (!f.descriptions.empty()) {
      json d = json::object();
      for (const auto& [k, text] : f.descriptions) d[std::to_string(k)] = text;
      v["descriptions"] = std::move(d);
    }
    if (f.classify_output) v["classify"] = *f.classify_output;
    videos[id] = std::move(v);
  }
  return {{"v", 1}, {"videos", std::move(videos)}};
}

FixtureSet load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  try {
    return fixtures_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(Errc::MalformedFile, path.string() + ": " + e.what());
  }
}

void save_fixtures(const FixtureSet& fixtures, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, "cannot write " + path.string());
  out << to_json(fixtures).dump(2) << '\n';
}

namespace {

const Fixture& require(const FixtureSet& set, const std::string& id) {
  const Fixture* f = set.find(id);
  if (!f) throw BackendError(Errc::ServiceError, "no fixture for video " + id, 404, 1);
  return *f;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

FixtureTranscriber::FixtureTranscriber(std::shared_ptr<const FixtureSet> fixtures)
    : fixtures_(std::move(fixtures)) {}

TranscriptionResponse FixtureTranscriber::transcribe(const TranscriptionRequest& request) {
  TranscriptionResponse out{require(*fixtures_, request.video_id).transcript};
  check_transcription(request, out);
  return out;
}

FixtureDescriber::FixtureDescriber(std::shared_ptr<const FixtureSet> fixtures)
    : fixtures_(std::move(fixtures)) {}

std::string describe_pixels(const SegmentFrames& segment) {
  std::uint64_t sum = 0;
  std::uint64_t count = 0;
  std::uint8_t lo = 255;
  std::uint8_t hi = 0;
  for (const auto& f : segment.frames) {
    for (std::uint8_t p : f.pixels) {
      sum += p;
      lo = std::min(lo, p);
      hi = std::max(hi, p);
    }
    count += f.pixels.size();
  }
  if (count == 0) lo = 0;
  const std::uint64_t tenths = count == 0 ? 0 : (sum * 10 + count / 2) / count;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu keyframe(s); mean luminance %llu.%llu; range %u-%u",
                segment.frames.size(), static_cast<unsigned long long>(tenths / 10),
                static_cast<unsigned long long>(tenths % 10), static_cast<unsigned>(lo),
                static_cast<unsigned>(hi));
  return buf;
}

DescriptionResponse FixtureDescriber::describe_frames(const DescriptionRequest& request) {
  const Fixture& f = require(*fixtures_, request.video_id);
  DescriptionResponse out;
  for (const auto& seg : request.segments) {
    if (seg.frames.empty()) {
      throw Error(Errc::EmptyInput, "segment " + std::to_string(seg.segment_index) + " has no frames");
    }
    const auto it = f.descriptions.find(seg.segment_index);
    out.descriptions[seg.segment_index] =
        it != f.descriptions.end() ? it->second : describe_pixels(seg);
  }
  check_descriptions(request, out);
  return out;
}

FixtureClassifier::FixtureClassifier(std::shared_ptr<const FixtureSet> fixtures)
    : fixtures_(std::move(fixtures)) {}

ClassifyResponse FixtureClassifier::classify(const ClassifyRequest& request) {
  if (request.prompt.empty()) throw Error(Errc::EmptyInput, "prompt is empty");
  const Fixture& f = require(*fixtures_, request.video_id);
  if (f.classify_output) return {*f.classify_output};
  const std::uint64_t h = fnv1a(request.prompt);
  char digest[17];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(h));
  return {prompt::render_verdict(kAllLabels[h % kLabelCount],
                                 std::string("prompt digest ") + digest)};
}

OracleClassifier::OracleClassifier(std::map<std::string, Label> gold) : gold_(std::move(gold)) {}

ClassifyResponse OracleClassifier::classify(const ClassifyRequest& request) {
  if (request.prompt.empty()) throw Error(Errc::EmptyInput, "prompt is empty");
  const auto it = gold_.find(request.video_id);
  if (it == gold_.end()) {
    throw BackendError(Errc::ServiceError, "no planted label for " + request.video_id, 404, 1);
  }
  return {prompt::render_verdict(it->second)};
}

AdversarialClassifier::AdversarialClassifier(std::shared_ptr<ClassifierBackend> inner,
                                             std::set<std::string> targets,
                                             AdversarialMode mode,
                                             std::chrono::milliseconds delay)
    : inner_(std::move(inner)), targets_(std::move(targets)), mode_(mode), delay_(delay) {}

ClassifyResponse AdversarialClassifier::classify(const ClassifyRequest& request) {
  if (!targets_.contains(request.video_id)) return inner_->classify(request);
  switch (mode_) {
    case AdversarialMode::garbage:
      return {"???"};
    case AdversarialMode::timeout:
      std::this_thread::sleep_for(delay_);
      throw BackendError(Errc::Timeout, "classify timed out for " + request.video_id, 0, 1);
    case AdversarialMode::server_error:
      throw BackendError(Errc::ServiceError, "classify failed for " + request.video_id, 500, 1);
  }
  return {"???"};
}

}  // namespace vidcheck::backends
