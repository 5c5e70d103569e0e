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

// JSON bodies for the HTTP contract, schema version 1. One POST route per
// capability; every body carries "v": 1.
//
//   POST /transcribe
//     -> {"v":1, "video_id", "language", "sample_rate_hz": 16000,
//         "encoding": "pcm_s16le", "audio_b64"}
//     <- {"v":1, "segments": [{"start_ms", "end_ms", "text"}]}
//
//   POST /describe
//     -> {"v":1, "video_id", "segments": [{"segment_index", "frames": [
//          {"index", "timestamp_ms", "width", "height", "encoding": "gray8",
//           "pixels_b64"}]}]}
//     <- {"v":1, "descriptions": [{"segment_index", "text"}]}
//
//   POST /classify
//     -> {"v":1, "video_id", "template_version", "prompt"}
//     <- {"v":1, "output"}

#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

#include "vidcheck/backends/backends.hpp"

namespace vidcheck::backends::wire {

inline constexpr int kSchemaVersion = 1;

inline constexpr std::string_view kTranscribeRoute = "/transcribe";
inline constexpr std::string_view kDescribeRoute = "/describe";
inline constexpr std::string_view kClassifyRoute = "/classify";

nlohmann::json to_json(const TranscriptionRequest& request);
nlohmann::json to_json(const DescriptionRequest& request);
nlohmann::json to_json(const ClassifyRequest& request);

nlohmann::json to_json(const TranscriptionResponse& response);
nlohmann::json to_json(const DescriptionResponse& response);
nlohmann::json to_json(const ClassifyResponse& response);

// Throw BackendError(MalformedResponse) on schema violations.
TranscriptionResponse transcription_response_from_json(const nlohmann::json& j);
DescriptionResponse description_response_from_json(const nlohmann::json& j);
ClassifyResponse classify_response_from_json(const nlohmann::json& j);

// Server side of /classify; binary payload routes are not decoded here.
ClassifyRequest classify_request_from_json(const nlohmann::json& j);

}  // namespace vidcheck::backends::wire
