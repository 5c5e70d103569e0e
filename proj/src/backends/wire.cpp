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

#include "vidcheck/backends/wire.hpp"

#include <httplib.h>

#include <string>

#include "vidcheck/audio/audio.hpp"

namespace vidcheck::backends::wire {
namespace {

using nlohmann::json;

std::string b64(const std::vector<std::uint8_t>& bytes) {
  return httplib::detail::base64_encode(std::string(bytes.begin(), bytes.end()));
}

[[noreturn]] void malformed(const std::string& what) {
  throw BackendError(Errc::MalformedResponse, what);
}

void check_version(const json& j) {
  if (!j.is_object()) malformed("body is not a JSON object");
  const auto it = j.find("v");
  if (it == j.end() || !it->is_number_integer() || it->get<int>() != kSchemaVersion) {
    malformed("missing or unsupported schema version");
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    malformed(e.what());
  }
}

}  // namespace

json to_json(const TranscriptionRequest& request) {
  return {{"v", kSchemaVersion},
          {"video_id", request.video_id},
          {"language", request.language_hint},
          {"sample_rate_hz", request.audio.sample_rate_hz},
          {"encoding", "pcm_s16le"},
          {"audio_b64", b64(audio::to_pcm16(request.audio))}};
}

json to_json(const DescriptionRequest& request) {
  json segments = json::array();
  for (const auto& seg : request.segments) {
    json frames = json::array();
    for (const auto& f : seg.frames) {
      frames.push_back({{"index", f.index},
                        {"timestamp_ms", f.timestamp_ms},
                        {"width", f.width},
                        {"height", f.height},
                        {"encoding", "gray8"},
                        {"pixels_b64", b64(f.pixels)}});
    }
    segments.push_back({{"segment_index", seg.segment_index}, {"frames", std::move(frames)}});
  }
  return {{"v", kSchemaVersion}, {"video_id", request.video_id}, {"segments", std::move(segments)}};
}

json to_json(const ClassifyRequest& request) {
  return {{"v", kSchemaVersion},
          {"video_id", request.video_id},
          {"template_version", request.template_version},
          {"prompt", request.prompt}};
}

json to_json(const TranscriptionResponse& response) {
  json segments = json::array();
  for (const auto& s : response.segments) {
    segments.push_back({{"start_ms", s.start_ms}, {"end_ms", s.end_ms}, {"text", s.text}});
  }
  return {{"v", kSchemaVersion}, {"segments", std::move(segments)}};
}

json to_json(const DescriptionResponse& response) {
  json items = json::array();
  for (const auto& [idx, text] : response.descriptions) {
    items.push_back({{"segment_index", idx}, {"text", text}});
  }
  return {{"v", kSchemaVersion}, {"descriptions", std::move(items)}};
}

json to_json(const ClassifyResponse& response) {
  return {{"v", kSchemaVersion}, {"output", response.raw}};
}

TranscriptionResponse transcription_response_from_json(const json& j) {
  check_version(j);
  return guarded([&] {
    TranscriptionResponse out;
    for (const auto& s : j.at("segments")) {
      out.segments.push_back({s.at("start_ms").get<std::int64_t>(),
                              s.at("end_ms").get<std::int64_t>(),
                              s.at("text").get<std::string>()});
    }
    return out;
  });
}

DescriptionResponse description_response_from_json(const json& j) {
  check_version(j);
  return guarded([&] {
    DescriptionResponse out;
    for (const auto& d : j.at("descriptions")) {
      const auto idx = d.at("segment_index").get<std::size_t>();
      if (!out.descriptions.emplace(idx, d.at("text").get<std::string>()).second) {
        malformed("duplicate description for segment " + std::to_string(idx));
      }
    }
    return out;
  });
}

ClassifyResponse classify_response_from_json(const json& j) {
  check_version(j);
  return guarded([&] { return ClassifyResponse{j.at("output").get<std::string>()}; });
}

ClassifyRequest classify_request_from_json(const json& j) {
  check_version(j);
  return guarded([&] {
    return ClassifyRequest{j.at("video_id").get<std::string>(),
                           j.value("template_version", std::string()),
                           j.at("prompt").get<std::string>()};
  });
}

}  // namespace vidcheck::backends::wire
