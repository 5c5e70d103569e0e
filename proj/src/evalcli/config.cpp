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

#include "vidcheck/evalcli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <toml.hpp>

#include "vidcheck/error.hpp"

namespace vidcheck::evalcli {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(Errc::InvalidConfig, what); }

void reject_unknown(const toml::table& t, const std::string& where,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, node] : t) {
    bool ok = false;
    for (auto k : known) ok = ok || key.str() == k;
    if (!ok) bad("unknown key " + where + "." + std::string(key.str()));
  }
}

template <typename T>
void read(const toml::table& t, std::string_view key, T& out, const std::string& where) {
  const toml::node* node = t.get(key);
  if (!node) return;
  if constexpr (std::is_same_v<T, bool>) {
    if (!node->is_boolean()) bad(where + "." + std::string(key) + " must be a boolean");
    out = *node->value<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!node->is_string()) bad(where + "." + std::string(key) + " must be a string");
    out = *node->value<std::string>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!node->is_number()) bad(where + "." + std::string(key) + " must be a number");
    out = static_cast<T>(*node->value<double>());
  } else {
    if (!node->is_integer()) bad(where + "." + std::string(key) + " must be an integer");
    const auto v = *node->value<std::int64_t>();
    if (v < 0 && std::is_unsigned_v<T>) bad(where + "." + std::string(key) + " must be >= 0");
    out = static_cast<T>(v);
  }
}

const toml::table* sub(const toml::table& t, std::string_view key, const std::string& where) {
  const toml::node* node = t.get(key);
  if (!node) return nullptr;
  if (!node->is_table()) bad(where + std::string(key) + " must be a table");
  return node->as_table();
}

void read_backend(const toml::table& t, backends::BackendConfig& c, const std::string& where) {
  reject_unknown(t, where,
                 {"endpoint", "timeout_ms", "max_retries", "backoff_base_ms",
                  "max_concurrent_requests", "max_prompt_chars", "jitter_seed", "auth_token",
                  "audit_path"});
  read(t, "endpoint", c.endpoint, where);
  read(t, "timeout_ms", c.timeout_ms, where);
  read(t, "max_retries", c.max_retries, where);
  read(t, "backoff_base_ms", c.backoff_base_ms, where);
  read(t, "max_concurrent_requests", c.max_concurrent_requests, where);
  read(t, "max_prompt_chars", c.max_prompt_chars, where);
  read(t, "jitter_seed", c.jitter_seed, where);
  std::string s;
  if (t.contains("auth_token")) {
    read(t, "auth_token", s, where);
    c.auth_token = s;
  }
  if (t.contains("audit_path")) {
    read(t, "audit_path", s, where);
    c.audit_path = s;
  }
}

}  // namespace

std::optional<backends::AdversarialMode> adversarial_mode_from_string(std::string_view name) {
  if (name == "garbage") return backends::AdversarialMode::garbage;
  if (name == "timeout") return backends::AdversarialMode::timeout;
  if (name == "server_error") return backends::AdversarialMode::server_error;
  return std::nullopt;
}

PipelineConfig parse_config(std::string_view text) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << e.description() << " at line " << e.source().begin.line;
    throw Error(Errc::MalformedFile, msg.str());
  }
  reject_unknown(root, "config", {"keyframe", "textline", "audio", "prompt", "labels", "backends"});

  PipelineConfig c;
  if (const auto* t = sub(root, "keyframe", "")) {
    reject_unknown(*t, "keyframe",
                   {"segment_duration_s", "frames_per_segment", "filter_threshold", "comparison_mode"});
    read(*t, "segment_duration_s", c.keyframe.segment_duration_s, "keyframe");
    read(*t, "frames_per_segment", c.keyframe.frames_per_segment, "keyframe");
    read(*t, "filter_threshold", c.keyframe.filter.filter_threshold, "keyframe");
    std::string mode;
    read(*t, "comparison_mode", mode, "keyframe");
    if (mode == "last_retained") {
      c.keyframe.filter.comparison_mode = keyframe::ComparisonMode::last_retained;
    } else if (!mode.empty() && mode != "immediate_predecessor") {
      bad("keyframe.comparison_mode: unknown mode " + mode);
    }
  }
  if (const auto* t = sub(root, "textline", "")) {
    reject_unknown(*t, "textline", {"gap_ms", "confidence_floor"});
    read(*t, "gap_ms", c.textline.gap_ms, "textline");
    read(*t, "confidence_floor", c.textline.confidence_floor, "textline");
  }
  if (const auto* t = sub(root, "audio", "")) {
    reject_unknown(*t, "audio", {"n_fft", "hop", "n_mels", "f_min_hz", "f_max_hz", "window"});
    read(*t, "n_fft", c.mel.n_fft, "audio");
    read(*t, "hop", c.mel.hop, "audio");
    read(*t, "n_mels", c.mel.n_mels, "audio");
    read(*t, "f_min_hz", c.mel.f_min_hz, "audio");
    read(*t, "f_max_hz", c.mel.f_max_hz, "audio");
    std::string window;
    read(*t, "window", window, "audio");
    if (window == "rectangular") {
      c.mel.window = audio::Window::rectangular;
    } else if (!window.empty() && window != "hann") {
      bad("audio.window: unknown window " + window);
    }
  }
  if (const auto* t = sub(root, "prompt", "")) {
    reject_unknown(*t, "prompt", {"template_version", "template_path", "max_comments", "budgets"});
    read(*t, "template_version", c.prompt.template_version, "prompt");
    std::string path;
    read(*t, "template_path", path, "prompt");
    if (!path.empty()) c.prompt.template_path = path;
    read(*t, "max_comments", c.prompt.max_comments, "prompt");
    if (const auto* b = sub(*t, "budgets", "prompt.")) {
      for (const auto& [key, node] : *b) {
        const auto section = prompt::section_from_string(key.str());
        if (!section) bad("prompt.budgets: unknown section " + std::string(key.str()));
        std::size_t v = 0;
        read(*b, key.str(), v, "prompt.budgets");
        c.prompt.budget_overrides[*section] = v;
      }
    }
  }
  if (const auto* t = sub(root, "labels", "")) {
    reject_unknown(*t, "labels", {"collapse_debunk"});
    read(*t, "collapse_debunk", c.collapse_debunk, "labels");
  }
  if (const auto* t = sub(root, "backends", "")) {
    reject_unknown(*t, "backends",
                   {"profile", "fixtures", "adversarial_ids", "adversarial_mode", "transcribe",
                    "describe", "classify"});
    read(*t, "profile", c.backends.profile, "backends");
    std::string path;
    read(*t, "fixtures", path, "backends");
    if (!path.empty()) c.backends.fixtures_path = path;
    if (const toml::node* ids = t->get("adversarial_ids")) {
      const toml::array* arr = ids->as_array();
      if (!arr) bad("backends.adversarial_ids must be an array of strings");
      for (const auto& id : *arr) {
        if (!id.is_string()) bad("backends.adversarial_ids must be an array of strings");
        c.backends.adversarial_ids.push_back(*id.value<std::string>());
      }
    }
    std::string mode;
    read(*t, "adversarial_mode", mode, "backends");
    if (!mode.empty()) {
      const auto m = adversarial_mode_from_string(mode);
      if (!m) bad("backends.adversarial_mode: unknown mode " + mode);
      c.backends.adversarial_mode = *m;
    }
    if (const auto* b = sub(*t, "transcribe", "backends.")) read_backend(*b, c.backends.transcribe, "backends.transcribe");
    if (const auto* b = sub(*t, "describe", "backends.")) read_backend(*b, c.backends.describe, "backends.describe");
    if (const auto* b = sub(*t, "classify", "backends.")) read_backend(*b, c.backends.classify, "backends.classify");
  }
  validate(c);
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const PipelineConfig& c) {
  if (!(c.keyframe.segment_duration_s > 0.0)) bad("keyframe.segment_duration_s must be > 0");
  if (c.keyframe.frames_per_segment == 0) bad("keyframe.frames_per_segment must be >= 1");
  const double th = c.keyframe.filter.filter_threshold;
  if (!(th >= 0.0 && th <= 1.0)) bad("keyframe.filter_threshold must be in [0, 1]");
  if (c.textline.gap_ms < 0) bad("textline.gap_ms must be >= 0");
  if (!(c.textline.confidence_floor >= 0.0 && c.textline.confidence_floor <= 1.0)) {
    bad("textline.confidence_floor must be in [0, 1]");
  }
  audio::validate(c.mel, audio::kTargetRateHz);
  for (const auto& [s, v] : c.prompt.budget_overrides) {
    if (v == 0) bad("prompt.budgets." + std::string(prompt::to_string(s)) + " must be > 0");
  }
  const auto& p = c.backends.profile;
  if (p != "fixture" && p != "oracle" && p != "adversarial" && p != "http") {
    bad("backends.profile: unknown profile " + p);
  }
  backends::validate(c.backends.transcribe);
  backends::validate(c.backends.describe);
  backends::validate(c.backends.classify);
}

prompt::PromptTemplate resolve_template(const PromptConfig& config) {
  prompt::PromptTemplate t = config.template_path ? prompt::load_template(*config.template_path)
                                                  : prompt::builtin_template(config.template_version);
  for (const auto& [s, v] : config.budget_overrides) t.budgets[s] = v;
  prompt::validate(t);
  return t;
}

}  // namespace vidcheck::evalcli
