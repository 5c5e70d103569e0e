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

// Pipeline configuration, loaded from TOML. Every key is optional:
//
//   [keyframe]
//   segment_duration_s = 10.0
//   frames_per_segment = 4
//   filter_threshold = 0.85
//   comparison_mode = "immediate_predecessor"   # or "last_retained"
//
//   [textline]
//   gap_ms = 800
//   confidence_floor = 0.5
//
//   [audio]
//   n_fft = 512, hop = 160, n_mels = 40, f_min_hz = 0.0, f_max_hz = 8000.0
//   window = "hann"                             # or "rectangular"
//
//   [prompt]
//   template_version = "v1"
//   template_path = "my.tmpl"                   # overrides the built-in
//   max_comments = 5
//   [prompt.budgets]
//   audio_transcript = 4000
//
//   [labels]
//   collapse_debunk = false
//
//   [backends]
//   profile = "fixture"        # fixture | oracle | adversarial | http
//   fixtures = "fixtures.json" # relative to the corpus directory
//   adversarial_ids = ["v1"]
//   adversarial_mode = "garbage"                # garbage | timeout | server_error
//   [backends.classify]                         # also transcribe, describe
//   endpoint = "http://127.0.0.1:8080"
//   timeout_ms = 30000, max_retries = 2, backoff_base_ms = 200
//   max_concurrent_requests = 4, max_prompt_chars = 100000
//   jitter_seed = 0, audit_path = "audit/classify.jsonl"

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vidcheck/audio/audio.hpp"
#include "vidcheck/backends/backends.hpp"
#include "vidcheck/backends/mocks.hpp"
#include "vidcheck/keyframe/keyframe.hpp"
#include "vidcheck/prompt/prompt.hpp"
#include "vidcheck/textline/textline.hpp"

namespace vidcheck::evalcli {

struct KeyframeConfig {
  double segment_duration_s = 10.0;
  std::size_t frames_per_segment = 4;
  keyframe::FrameFilterConfig filter;
};

struct PromptConfig {
  std::string template_version = "v1";
  std::optional<std::filesystem::path> template_path;
  std::size_t max_comments = 5;
  std::map<prompt::Section, std::size_t> budget_overrides;
};

struct BackendSettings {
  std::string profile = "fixture";
  std::optional<std::filesystem::path> fixtures_path;
  std::vector<std::string> adversarial_ids;
  backends::AdversarialMode adversarial_mode = backends::AdversarialMode::garbage;
  backends::BackendConfig transcribe;
  backends::BackendConfig describe;
  backends::BackendConfig classify;
};

struct PipelineConfig {
  KeyframeConfig keyframe;
  textline::MergeConfig textline;
  audio::MelConfig mel;
  PromptConfig prompt;
  bool collapse_debunk = false;
  BackendSettings backends;
};

// Throws Error(InvalidConfig) on bad values or unknown enum strings and
// Error(MalformedFile) on TOML syntax errors.
PipelineConfig parse_config(std::string_view toml_text);
PipelineConfig load_config(const std::filesystem::path& path);  // FileNotFound
void validate(const PipelineConfig& config);

// The template named by the config with budget overrides applied.
prompt::PromptTemplate resolve_template(const PromptConfig& config);

std::optional<backends::AdversarialMode> adversarial_mode_from_string(std::string_view name);

}  // namespace vidcheck::evalcli
