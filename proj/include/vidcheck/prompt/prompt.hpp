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

// Prompt assembly and verdict parsing.
//
// A prompt is built from a versioned template. Template files are plain text:
//
//   # comment
//   @version v1
//   @budget <section> <max code points>
//   @text task_header        (block runs until @end)
//   ...
//   @end
//   @text instructions
//   ...
//   @end
//   @layout                  (one {{section}} per line until @end or EOF)
//   {{task_header}}
//   ...
//
// Sections: task_header, title, ocr_transcript, audio_transcript,
// visual_descriptions, metadata, instructions. The layout must name each
// exactly once. Sections with an empty body are omitted; the rest are joined
// with a blank line. Bodies are cut to their budget in code points.
//
// The model is expected to answer with a line "LABEL: <real|fake|debunk>"
// and optionally "REASON: <text>".

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vidcheck/core/types.hpp"
#include "vidcheck/textline/textline.hpp"

namespace vidcheck::prompt {

enum class Section {
  task_header,
  title,
  ocr_transcript,
  audio_transcript,
  visual_descriptions,
  metadata,
  instructions,
};

inline constexpr std::size_t kSectionCount = 7;

std::string_view to_string(Section section) noexcept;
std::optional<Section> section_from_string(std::string_view name) noexcept;

// Heading line printed above a non-empty body ("" for header/instructions).
std::string_view section_heading(Section section) noexcept;

struct PromptTemplate {
  std::string version;
  std::vector<Section> order;
  std::map<Section, std::size_t> budgets;
  std::string task_header;
  std::string instructions;
};

// Throws TemplateInvalid.
PromptTemplate parse_template(std::string_view text);
PromptTemplate load_template(const std::filesystem::path& path);
void validate(const PromptTemplate& tmpl);

// Built-in templates by version ("v1"). Throws TemplateInvalid when unknown.
const PromptTemplate& builtin_template(std::string_view version);
std::string_view builtin_template_text(std::string_view version);

struct MetadataBlock {
  std::string text;
  std::size_t comments_dropped = 0;
};

// Seconds since the epoch as YYYY-MM-DDTHH:MM:SSZ.
std::string iso8601_utc(std::int64_t epoch_seconds);

// Fixed key order: upload_time, author, likes, comments_count, comments.
// Keeps the first max_comments comments.
MetadataBlock format_metadata(const Metadata& meta, std::size_t max_comments);

// "[s.ds-s.ds] text" per line, tenths rounded half up.
std::string render_transcript(const textline::Transcript& transcript);

struct VisualDescription {
  std::size_t segment_index = 0;
  std::string text;
};

struct PromptInputs {
  std::string title;
  textline::Transcript ocr;
  textline::Transcript audio;
  std::vector<VisualDescription> visual;
  MetadataBlock metadata;
};

struct Prompt {
  std::string text;
  std::string template_version;
  std::map<Section, std::size_t> chars_dropped;  // only truncated sections
  std::size_t comments_dropped = 0;
};

// Pure: equal inputs and template give byte-identical output.
Prompt assemble_prompt(const PromptInputs& inputs, const PromptTemplate& tmpl);

// Scaffold code points that can surround the section bodies under this
// template; text length never exceeds the budget sum plus this.
std::size_t scaffold_length(const PromptTemplate& tmpl);

struct Verdict {
  Label label = Label::real;
  std::optional<std::string> rationale;
  std::string raw;
};

// Throws UnparseableVerdict.
Verdict parse_verdict(std::string_view model_output);

std::string render_verdict(Label label, const std::optional<std::string>& rationale = {});

}  // namespace vidcheck::prompt
