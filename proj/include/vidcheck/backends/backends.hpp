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

// Service contracts for the three external model capabilities: audio
// transcription, keyframe description and prompt classification.

#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vidcheck/core/types.hpp"
#include "vidcheck/error.hpp"

namespace vidcheck::backends {

// Raised by every backend on failure. code() is one of Timeout, ServiceError,
// MalformedResponse or PromptTooLarge.
class BackendError : public Error {
 public:
  BackendError(Errc code, const std::string& message, int status = 0, int attempts = 0)
      : Error(code, message), status_(status), attempts_(attempts) {}

  // HTTP status for ServiceError; 0 for transport failures and other codes.
  int status() const noexcept { return status_; }
  int attempts() const noexcept { return attempts_; }

 private:
  int status_;
  int attempts_;
};

struct BackendConfig {
  std::string endpoint;  // base URL, e.g. http://127.0.0.1:8080
  int timeout_ms = 30000;
  int max_retries = 2;
  int backoff_base_ms = 200;
  int max_concurrent_requests = 4;
  std::optional<std::string> auth_token;
  std::size_t max_prompt_chars = 100000;
  std::uint64_t jitter_seed = 0;
  std::optional<std::filesystem::path> audit_path;
};

// Throws InvalidConfig.
void validate(const BackendConfig& config);

// Overrides endpoint and token from VIDCHECK_<CAPABILITY>_URL and
// VIDCHECK_<CAPABILITY>_TOKEN (falling back to VIDCHECK_BACKEND_TOKEN).
// capability is "TRANSCRIBE", "DESCRIBE" or "CLASSIFY".
BackendConfig apply_env(BackendConfig config, const std::string& capability);

struct TranscriptSegment {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;

  friend bool operator==(const TranscriptSegment&, const TranscriptSegment&) = default;
};

struct TranscriptionRequest {
  std::string video_id;
  std::string language_hint = "auto";
  AudioSignal audio;  // 16 kHz, peak-normalized
};

struct TranscriptionResponse {
  std::vector<TranscriptSegment> segments;
};

struct SegmentFrames {
  std::size_t segment_index = 0;
  std::vector<Frame> frames;
};

struct DescriptionRequest {
  std::string video_id;
  std::vector<SegmentFrames> segments;
};

struct DescriptionResponse {
  std::map<std::size_t, std::string> descriptions;  // by segment index
};

struct ClassifyRequest {
  std::string video_id;
  std::string template_version;
  std::string prompt;
};

struct ClassifyResponse {
  std::string raw;
};

class TranscriptionBackend {
 public:
  virtual ~TranscriptionBackend() = default;
  virtual TranscriptionResponse transcribe(const TranscriptionRequest& request) = 0;
};

class DescriptionBackend {
 public:
  virtual ~DescriptionBackend() = default;
  virtual DescriptionResponse describe_frames(const DescriptionRequest& request) = 0;
};

class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;
  virtual ClassifyResponse classify(const ClassifyRequest& request) = 0;
};

// Response contract checks shared by every backend flavor. Throw
// BackendError(MalformedResponse).
void check_transcription(const TranscriptionRequest& request,
                         const TranscriptionResponse& response);
void check_descriptions(const DescriptionRequest& request,
                        const DescriptionResponse& response);
void check_classification(const ClassifyResponse& response);

// Request-side guards. Throw BackendError(PromptTooLarge) / InvalidConfig.
void check_prompt_size(const ClassifyRequest& request, std::size_t max_prompt_chars);

struct Backends {
  std::shared_ptr<TranscriptionBackend> transcriber;
  std::shared_ptr<DescriptionBackend> describer;
  std::shared_ptr<ClassifierBackend> classifier;
};

}  // namespace vidcheck::backends
