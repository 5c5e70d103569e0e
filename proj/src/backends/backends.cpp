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

#include "vidcheck/backends/backends.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "vidcheck/core/text.hpp"

namespace vidcheck::backends {

void validate(const BackendConfig& config) {
  if (config.timeout_ms <= 0) throw Error(Errc::InvalidConfig, "timeout_ms must be > 0");
  if (config.max_retries < 0) throw Error(Errc::InvalidConfig, "max_retries must be >= 0");
  if (config.backoff_base_ms < 0)
    throw Error(Errc::InvalidConfig, "backoff_base_ms must be >= 0");
  if (config.max_concurrent_requests < 1)
    throw Error(Errc::InvalidConfig, "max_concurrent_requests must be >= 1");
  if (config.max_prompt_chars == 0)
    throw Error(Errc::InvalidConfig, "max_prompt_chars must be > 0");
}

BackendConfig apply_env(BackendConfig config, const std::string& capability) {
  const std::string prefix = "VIDCHECK_" + capability;
  if (const char* url = std::getenv((prefix + "_URL").c_str()); url && *url) {
    config.endpoint = url;
  }
  if (const char* token = std::getenv((prefix + "_TOKEN").c_str()); token && *token) {
    config.auth_token = token;
  } else if (const char* shared = std::getenv("VIDCHECK_BACKEND_TOKEN"); shared && *shared) {
    config.auth_token = shared;
  }
  return config;
}

void check_transcription(const TranscriptionRequest& request,
                         const TranscriptionResponse& response) {
  std::int64_t prev_start = 0;
  std::int64_t covered = 0;
  std::int64_t covered_until = 0;
  for (std::size_t i = 0; i < response.segments.size(); ++i) {
    const auto& seg = response.segments[i];
    if (seg.start_ms < 0 || seg.end_ms < seg.start_ms) {
      throw BackendError(Errc::MalformedResponse,
                         "transcript segment " + std::to_string(i) + " has a bad span");
    }
    if (i > 0 && seg.start_ms < prev_start) {
      throw BackendError(Errc::MalformedResponse, "transcript segments not time-ordered");
    }
    prev_start = seg.start_ms;
    // union length of the spans
    const std::int64_t from = std::max(seg.start_ms, covered_until);
    if (seg.end_ms > from) covered += seg.end_ms - from;
    covered_until = std::max(covered_until, seg.end_ms);
  }
  const auto limit_ms =
      static_cast<std::int64_t>(std::ceil(request.audio.duration_s() * 1000.0));
  if (covered > limit_ms) {
    throw BackendError(Errc::MalformedResponse,
                       "transcript covers " + std::to_string(covered) +
                           " ms of a " + std::to_string(limit_ms) + " ms signal");
  }
}

void check_descriptions(const DescriptionRequest& request,
                        const DescriptionResponse& response) {
  std::set<std::size_t> wanted;
  for (const auto& seg : request.segments) wanted.insert(seg.segment_index);
  for (std::size_t idx : wanted) {
    if (!response.descriptions.contains(idx)) {
      throw BackendError(Errc::MalformedResponse,
                         "missing description for segment " + std::to_string(idx));
    }
  }
  for (const auto& [idx, text] : response.descriptions) {
    if (!wanted.contains(idx)) {
      throw BackendError(Errc::MalformedResponse,
                         "description for unrequested segment " + std::to_string(idx));
    }
  }
}

void check_classification(const ClassifyResponse& response) {
  if (response.raw.empty()) {
    throw BackendError(Errc::MalformedResponse, "empty classifier output");
  }
}

void check_prompt_size(const ClassifyRequest& request, std::size_t max_prompt_chars) {
  if (request.prompt.empty()) throw Error(Errc::EmptyInput, "prompt is empty");
  const std::size_t n = utf8_length(request.prompt);
  if (n > max_prompt_chars) {
    throw BackendError(Errc::PromptTooLarge, "prompt has " + std::to_string(n) +
                                                 " code points, limit " +
                                                 std::to_string(max_prompt_chars));
  }
}

}  // namespace vidcheck::backends
