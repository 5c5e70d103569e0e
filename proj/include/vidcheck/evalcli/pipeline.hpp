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

// Per-record pipeline. Stages run in a fixed order:
//
//   validate, segment_plan, frame_selection, similarity_filter, ocr_merge,
//   audio_features, transcribe, describe, metadata, assemble, classify, parse
//
// validate, segment_plan, frame_selection, similarity_filter, metadata,
// assemble, classify and parse are mandatory: a failure there ends the record
// with no verdict. ocr_merge, audio_features, transcribe and describe
// failures are recorded and their prompt section is left out.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vidcheck/backends/backends.hpp"
#include "vidcheck/evalcli/config.hpp"
#include "vidcheck/keyframe/keyframe.hpp"
#include "vidcheck/prompt/prompt.hpp"
#include "vidcheck/textline/textline.hpp"

namespace vidcheck::evalcli {

enum class Stage {
  validate,
  segment_plan,
  frame_selection,
  similarity_filter,
  ocr_merge,
  audio_features,
  transcribe,
  describe,
  metadata,
  assemble,
  classify,
  parse,
};

std::string_view to_string(Stage stage) noexcept;
bool is_mandatory(Stage stage) noexcept;

enum class StageStatus { ok, skipped, failed };

std::string_view to_string(StageStatus status) noexcept;

struct StageOutcome {
  Stage stage = Stage::validate;
  StageStatus status = StageStatus::ok;
  std::optional<Errc> error;
  std::string message;
  double elapsed_ms = 0.0;
};

struct SegmentArtifacts {
  std::size_t segment_index = 0;
  std::vector<std::int64_t> selected;   // frame positions after uniform selection
  std::vector<std::uint32_t> keyframes;  // Frame::index after the filter
};

struct MelSummary {
  std::size_t frames = 0;
  std::size_t n_mels = 0;
  std::vector<double> mean_log_energy;  // per mel band, ln(1e-10 + S)
};

struct Artifacts {
  std::optional<keyframe::SegmentPlan> plan;
  std::vector<SegmentArtifacts> segments;
  std::optional<textline::Transcript> ocr;
  std::optional<MelSummary> mel;
  std::optional<textline::Transcript> audio;
  std::vector<prompt::VisualDescription> descriptions;
  std::optional<prompt::MetadataBlock> metadata;
  std::optional<prompt::Prompt> prompt;
  std::optional<std::string> raw_output;
};

struct PipelineResult {
  std::string video_id;
  std::optional<prompt::Verdict> verdict;  // empty: verdict unavailable
  std::optional<Stage> failed_stage;
  std::vector<StageOutcome> stages;
  Artifacts artifacts;

  bool ok() const noexcept { return verdict.has_value(); }
};

struct PipelineInput {
  VideoRecord record;
  std::vector<textline::OcrLine> ocr;
};

enum class RunMode { full, extract_only };  // extract_only stops after assemble

// Never throws for per-record failures; they land in the stage list.
PipelineResult run_pipeline(const PipelineInput& input, const PipelineConfig& config,
                            const prompt::PromptTemplate& tmpl,
                            const backends::Backends& backends, RunMode mode = RunMode::full);

nlohmann::json artifacts_to_json(const PipelineResult& result);

// One verdicts JSONL row. Timings are written only when asked for, so that
// default output stays byte-stable.
nlohmann::json verdict_to_json(const PipelineResult& result, const std::string& template_version,
                               bool with_timings);

}  // namespace vidcheck::evalcli
