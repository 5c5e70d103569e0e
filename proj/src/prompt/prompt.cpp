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

#include "vidcheck/prompt/prompt.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "vidcheck/core/text.hpp"
#include "vidcheck/error.hpp"

namespace vidcheck::prompt {
namespace {

constexpr std::array<Section, kSectionCount> kSections = {
    Section::task_header,      Section::title,    Section::ocr_transcript,
    Section::audio_transcript, Section::visual_descriptions, Section::metadata,
    Section::instructions};

constexpr std::string_view kTemplateV1 = R"(# vidcheck prompt template, version 1
@version v1
@budget task_header 2000
@budget title 500
@budget ocr_transcript 4000
@budget audio_transcript 4000
@budget visual_descriptions 3000
@budget metadata 1500
@budget instructions 2000
@text task_header
You are a fact-checking analyst for short videos. The material below was
extracted from a single video: its title, on-screen text, spoken audio,
keyframe descriptions and platform metadata.
@end
@text instructions
Classify the video as real (genuine content), fake (spreads misinformation)
or debunk (refutes a false claim). Reply with exactly two lines:
LABEL: <real|fake|debunk>
REASON: <one sentence>
@end
@layout
{{task_header}}
{{title}}
{{ocr_transcript}}
{{audio_transcript}}
{{visual_descriptions}}
{{metadata}}
{{instructions}}
@end
)";

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(Errc::TemplateInvalid, what);
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  return lines;
}

void AppendTenths(std::string& out, std::int64_t ms) {
  const std::int64_t tenths = (ms + 50) / 100;
  out += std::to_string(tenths / 10);
  out += '.';
  out += std::to_string(tenths % 10);
  out += 's';
}

// Leading run of letters, lowercased.
std::string FirstWord(std::string_view s) {
  s = Trim(s);
  std::size_t n = 0;
  while (n < s.size() && std::isalpha(static_cast<unsigned char>(s[n]))) ++n;
  return to_lower_ascii(s.substr(0, n));
}

// Value after "<key>:" when the line starts with key (case-insensitive).
std::optional<std::string_view> KeyedValue(std::string_view line, std::string_view key) {
  line = Trim(line);
  if (line.size() < key.size() || to_lower_ascii(line.substr(0, key.size())) != key) {
    return std::nullopt;
  }
  std::string_view rest = Trim(line.substr(key.size()));
  if (rest.empty() || rest.front() != ':') return std::nullopt;
  return Trim(rest.substr(1));
}

}  // namespace

std::string_view to_string(Section section) noexcept {
  switch (section) {
    case Section::task_header: return "task_header";
    case Section::title: return "title";
    case Section::ocr_transcript: return "ocr_transcript";
    case Section::audio_transcript: return "audio_transcript";
    case Section::visual_descriptions: return "visual_descriptions";
    case Section::metadata: return "metadata";
    case Section::instructions: return "instructions";
  }
  return "task_header";
}

std::optional<Section> section_from_string(std::string_view name) noexcept {
  for (Section s : kSections) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

std::string_view section_heading(Section section) noexcept {
  switch (section) {
    case Section::title: return "TITLE:";
    case Section::ocr_transcript: return "ON-SCREEN TEXT (OCR):";
    case Section::audio_transcript: return "AUDIO TRANSCRIPT:";
    case Section::visual_descriptions: return "VISUAL DESCRIPTIONS:";
    case Section::metadata: return "METADATA:";
    case Section::task_header:
    case Section::instructions: return "";
  }
  return "";
}

void validate(const PromptTemplate& tmpl) {
  if (tmpl.version.empty()) Invalid("missing @version");
  std::set<Section> seen;
  for (Section s : tmpl.order) {
    if (!seen.insert(s).second) Invalid("section '" + std::string(to_string(s)) + "' repeated");
  }
  for (Section s : kSections) {
    if (!seen.contains(s)) Invalid("layout lacks section '" + std::string(to_string(s)) + "'");
    const auto it = tmpl.budgets.find(s);
    if (it == tmpl.budgets.end() || it->second == 0) {
      Invalid("section '" + std::string(to_string(s)) + "' needs a positive budget");
    }
  }
}

PromptTemplate parse_template(std::string_view text) {
  PromptTemplate tmpl;
  enum class Mode { top, text, layout } mode = Mode::top;
  std::string* block = nullptr;
  std::vector<std::string_view> block_lines;
  bool have_layout = false;
  std::size_t line_no = 0;

  const auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
  const auto close_block = [&] {
    std::string joined;
    for (std::size_t i = 0; i < block_lines.size(); ++i) {
      if (i) joined += '\n';
      joined += block_lines[i];
    }
    *block = std::move(joined);
    block_lines.clear();
    block = nullptr;
  };

  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (mode == Mode::text) {
      if (line == "@end") {
        close_block();
        mode = Mode::top;
      } else {
        block_lines.push_back(raw);
      }
      continue;
    }
    if (mode == Mode::layout) {
      if (line.empty()) continue;
      if (line == "@end") {
        mode = Mode::top;
        continue;
      }
      if (line.size() < 5 || !line.starts_with("{{") || !line.ends_with("}}")) {
        Invalid(where() + "layout lines must be a single {{section}}");
      }
      const auto name = Trim(line.substr(2, line.size() - 4));
      const auto section = section_from_string(name);
      if (!section) Invalid(where() + "unknown section '" + std::string(name) + "'");
      tmpl.order.push_back(*section);
      continue;
    }
    if (line.empty() || line.front() == '#') continue;

    std::istringstream words{std::string(line)};
    std::string directive;
    words >> directive;
    if (directive == "@version") {
      words >> tmpl.version;
    } else if (directive == "@budget") {
      std::string name;
      long long budget = -1;
      words >> name >> budget;
      const auto section = section_from_string(name);
      if (!section) Invalid(where() + "unknown section '" + name + "'");
      if (!words || budget <= 0) Invalid(where() + "budget must be a positive integer");
      tmpl.budgets[*section] = static_cast<std::size_t>(budget);
    } else if (directive == "@text") {
      std::string name;
      words >> name;
      if (name == "task_header") {
        block = &tmpl.task_header;
      } else if (name == "instructions") {
        block = &tmpl.instructions;
      } else {
        Invalid(where() + "@text only applies to task_header or instructions");
      }
      mode = Mode::text;
    } else if (directive == "@layout") {
      if (have_layout) Invalid(where() + "second @layout");
      have_layout = true;
      mode = Mode::layout;
    } else {
      Invalid(where() + "unknown directive '" + directive + "'");
    }
  }
  if (mode == Mode::text) Invalid("unterminated @text block");
  if (!have_layout) Invalid("missing @layout");
  validate(tmpl);
  return tmpl;
}

PromptTemplate load_template(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_template(buf.str());
}

std::string_view builtin_template_text(std::string_view version) {
  if (version == "v1") return kTemplateV1;
  Invalid("no built-in template '" + std::string(version) + "'");
}

const PromptTemplate& builtin_template(std::string_view version) {
  static const PromptTemplate v1 = parse_template(kTemplateV1);
  if (version == "v1") return v1;
  Invalid("no built-in template '" + std::string(version) + "'");
}

std::string iso8601_utc(std::int64_t epoch_seconds) {
  const std::time_t t = static_cast<std::time_t>(epoch_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

MetadataBlock format_metadata(const Metadata& meta, std::size_t max_comments) {
  MetadataBlock block;
  std::string& out = block.text;
  out += "upload_time: " + iso8601_utc(meta.upload_time) + "\n";
  out += "author: " + collapse_whitespace(meta.author) + "\n";
  out += "likes: " + std::to_string(meta.like_count) + "\n";
  out += "comments_count: " + std::to_string(meta.comment_count) + "\n";
  if (meta.comments.empty()) {
    out += "comments: (none)";
    return block;
  }
  out += "comments:";
  const std::size_t shown = std::min(max_comments, meta.comments.size());
  for (std::size_t i = 0; i < shown; ++i) {
    out += "\n- " + collapse_whitespace(meta.comments[i]);
  }
  block.comments_dropped = meta.comments.size() - shown;
  if (block.comments_dropped > 0) {
    out += "\n(" + std::to_string(block.comments_dropped) + " more not shown)";
  }
  return block;
}

std::string render_transcript(const textline::Transcript& transcript) {
  std::string out;
  for (const auto& line : transcript.lines) {
    if (!out.empty()) out += '\n';
    out += '[';
    AppendTenths(out, line.start_ms);
    out += '-';
    AppendTenths(out, line.end_ms);
    out += "] ";
    out += line.text;
  }
  return out;
}

std::size_t scaffold_length(const PromptTemplate& tmpl) {
  std::size_t n = 1;  // trailing newline
  for (Section s : tmpl.order) {
    const auto heading = section_heading(s);
    if (!heading.empty()) n += utf8_length(heading) + 1;
  }
  if (!tmpl.order.empty()) n += 2 * (tmpl.order.size() - 1);
  return n;
}

Prompt assemble_prompt(const PromptInputs& inputs, const PromptTemplate& tmpl) {
  validate(tmpl);
  Prompt prompt;
  prompt.template_version = tmpl.version;
  prompt.comments_dropped = inputs.metadata.comments_dropped;

  const auto body_of = [&](Section s) -> std::string {
    switch (s) {
      case Section::task_header: return tmpl.task_header;
      case Section::title: return collapse_whitespace(inputs.title);
      case Section::ocr_transcript: return render_transcript(inputs.ocr);
      case Section::audio_transcript: return render_transcript(inputs.audio);
      case Section::visual_descriptions: {
        std::vector<VisualDescription> sorted = inputs.visual;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const auto& a, const auto& b) { return a.segment_index < b.segment_index; });
        std::string out;
        for (const auto& d : sorted) {
          const std::string text = collapse_whitespace(d.text);
          if (text.empty()) continue;
          if (!out.empty()) out += '\n';
          out += "[segment " + std::to_string(d.segment_index) + "] " + text;
        }
        return out;
      }
      case Section::metadata: return inputs.metadata.text;
      case Section::instructions: return tmpl.instructions;
    }
    return {};
  };

  std::string& text = prompt.text;
  for (Section s : tmpl.order) {
    std::string body = body_of(s);
    if (body.empty()) continue;
    const std::size_t budget = tmpl.budgets.at(s);
    const std::size_t length = utf8_length(body);
    if (length > budget) {
      body = std::string(utf8_prefix(body, budget));
      prompt.chars_dropped[s] = length - budget;
    }
    if (!text.empty()) text += "\n\n";
    const auto heading = section_heading(s);
    if (!heading.empty()) {
      text += heading;
      text += '\n';
    }
    text += body;
  }
  text += '\n';
  return prompt;
}

Verdict parse_verdict(std::string_view model_output) {
  Verdict verdict;
  verdict.raw = std::string(model_output);
  std::optional<Label> label;
  for (std::string_view line : SplitLines(model_output)) {
    if (!label) {
      if (const auto value = KeyedValue(line, "label")) {
        try {
          label = parse_label(FirstWord(*value));
        } catch (const Error&) {
        }
        continue;
      }
    }
    if (!verdict.rationale) {
      if (const auto value = KeyedValue(line, "reason"); value && !value->empty()) {
        verdict.rationale = std::string(*value);
      }
    }
  }
  if (!label) {
    // Fall back to the first bare label word anywhere in the text.
    const std::string lowered = to_lower_ascii(model_output);
    std::size_t i = 0;
    while (i < lowered.size() && !label) {
      while (i < lowered.size() && !std::isalpha(static_cast<unsigned char>(lowered[i]))) ++i;
      std::size_t j = i;
      while (j < lowered.size() && std::isalpha(static_cast<unsigned char>(lowered[j]))) ++j;
      const std::string_view word(lowered.data() + i, j - i);
      if (word == "real" || word == "fake" || word == "debunk" || word == "debunking") {
        label = parse_label(word);
      }
      i = j;
    }
  }
  if (!label) {
    throw Error(Errc::UnparseableVerdict,
                "no label in model output '" + std::string(utf8_prefix(model_output, 80)) + "'");
  }
  verdict.label = *label;
  return verdict;
}

std::string render_verdict(Label label, const std::optional<std::string>& rationale) {
  std::string out = "LABEL: " + std::string(to_string(label));
  if (rationale && !rationale->empty()) out += "\nREASON: " + *rationale;
  return out;
}

}  // namespace vidcheck::prompt
