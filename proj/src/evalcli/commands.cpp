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

#include "vidcheck/evalcli/commands.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <nlohmann/json.hpp>

#include "vidcheck/backends/http_client.hpp"
#include "vidcheck/backends/mocks.hpp"
#include "vidcheck/core/text.hpp"

namespace vidcheck::evalcli {

namespace fs = std::filesystem;
using nlohmann::json;

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

backends::Backends make_backends(const BackendSettings& s, const Corpus& corpus) {
  backends::Backends out;
  if (s.profile == "http") {
    auto tcfg = backends::apply_env(s.transcribe, "TRANSCRIBE");
    auto dcfg = backends::apply_env(s.describe, "DESCRIBE");
    auto ccfg = backends::apply_env(s.classify, "CLASSIFY");
    if (!tcfg.endpoint.empty()) out.transcriber = std::make_shared<backends::HttpTranscriber>(tcfg);
    if (!dcfg.endpoint.empty()) out.describer = std::make_shared<backends::HttpDescriber>(dcfg);
    out.classifier = std::make_shared<backends::HttpClassifier>(ccfg);
    return out;
  }

  auto fixtures = std::make_shared<backends::FixtureSet>();
  fs::path fixtures_path = s.fixtures_path.value_or("fixtures.json");
  if (fixtures_path.is_relative()) fixtures_path = corpus.base_dir / fixtures_path;
  if (fs::exists(fixtures_path)) {
    *fixtures = backends::load_fixtures(fixtures_path);
  } else if (s.fixtures_path) {
    throw Error(Errc::FileNotFound, fixtures_path.string());
  }
  out.transcriber = std::make_shared<backends::FixtureTranscriber>(fixtures);
  out.describer = std::make_shared<backends::FixtureDescriber>(fixtures);
  if (s.profile == "fixture") {
    out.classifier = std::make_shared<backends::FixtureClassifier>(fixtures);
    return out;
  }

  std::map<std::string, Label> gold;
  for (const auto& r : corpus.records) {
    if (r.label) gold[r.video_id] = *r.label;
  }
  out.classifier = std::make_shared<backends::OracleClassifier>(std::move(gold));
  if (s.profile == "adversarial") {
    out.classifier = std::make_shared<backends::AdversarialClassifier>(
        out.classifier, std::set<std::string>(s.adversarial_ids.begin(), s.adversarial_ids.end()),
        s.adversarial_mode, std::chrono::milliseconds(20));
  } else if (s.profile != "oracle") {
    throw Error(Errc::InvalidConfig, "unknown backend profile " + s.profile);
  }
  return out;
}

std::vector<PipelineResult> run_corpus(const Corpus& corpus, const PipelineConfig& config,
                                       const backends::Backends& bk, RunMode mode,
                                       std::size_t jobs) {
  const prompt::PromptTemplate tmpl = resolve_template(config.prompt);
  std::vector<PipelineResult> results(corpus.records.size());
  parallel_for(corpus.records.size(), jobs, [&](std::size_t i) {
    const CorpusRecord& rec = corpus.records[i];
    PipelineInput input;
    std::string load_error;
    std::optional<Errc> load_code;
    if (!rec.flags.empty()) {
      load_code = Errc::FileNotFound;
      for (const auto& f : rec.flags) load_error += (load_error.empty() ? "" : "; ") + f;
    } else {
      try {
        auto loaded = materialize(rec, corpus.base_dir);
        input.record = std::move(loaded.video);
        input.ocr = std::move(loaded.ocr);
      } catch (const Error& e) {
        load_code = e.code();
        load_error = e.what();
      }
    }
    if (load_code) {
      PipelineResult r;
      r.video_id = rec.video_id;
      r.failed_stage = Stage::validate;
      r.stages.push_back({Stage::validate, StageStatus::failed, load_code, load_error, 0.0});
      results[i] = std::move(r);
      return;
    }
    results[i] = run_pipeline(input, config, tmpl, bk, mode);
  });
  return results;
}

namespace {

PipelineConfig effective_config(const RunOptions& o) {
  PipelineConfig c = o.config_path ? load_config(*o.config_path) : PipelineConfig{};
  if (o.backend_profile) c.backends.profile = *o.backend_profile;
  if (o.template_version) {
    c.prompt.template_version = *o.template_version;
    c.prompt.template_path.reset();
  }
  if (o.adversarial_ids) c.backends.adversarial_ids = *o.adversarial_ids;
  if (c.prompt.template_path && c.prompt.template_path->is_relative() && o.config_path) {
    c.prompt.template_path = o.config_path->parent_path() / *c.prompt.template_path;
  }
  validate(c);
  return c;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::FileNotFound, "cannot write " + path.string());
  return out;
}

std::string safe_name(const std::string& id) {
  std::string out;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

RunSummary run_and_write(const RunOptions& o, RunMode mode) {
  const PipelineConfig config = effective_config(o);
  const Corpus corpus = load_corpus(o.corpus, LoadMode::strict);
  const auto bk = make_backends(config.backends, corpus);
  const auto results = run_corpus(corpus, config, bk, mode, o.jobs);
  const std::string version = resolve_template(config.prompt).version;

  fs::create_directories(o.out_dir / "artifacts");
  auto prompts = open_out(o.out_dir / "prompts.jsonl");
  std::optional<std::ofstream> verdicts;
  if (mode == RunMode::full) verdicts = open_out(o.out_dir / "verdicts.jsonl");

  RunSummary summary;
  summary.n_records = results.size();
  for (const auto& r : results) {
    const bool ok = mode == RunMode::full ? r.ok() : !r.failed_stage.has_value();
    if (ok) {
      ++summary.n_ok;
    } else {
      ++summary.n_failed;
      summary.failed_ids.push_back(r.video_id);
    }
    if (r.artifacts.prompt) {
      prompts << json{{"video_id", r.video_id},
                      {"template_version", r.artifacts.prompt->template_version},
                      {"prompt", r.artifacts.prompt->text}}
                     .dump()
              << '\n';
    }
    if (verdicts) *verdicts << verdict_to_json(r, version, o.record_timings).dump() << '\n';
    auto art = open_out(o.out_dir / "artifacts" / (safe_name(r.video_id) + ".json"));
    art << artifacts_to_json(r).dump(2) << '\n';
  }
  auto sum = open_out(o.out_dir / "summary.json");
  sum << json{{"v", 1},
              {"command", mode == RunMode::full ? "classify" : "extract"},
              {"template_version", version},
              {"backend_profile", config.backends.profile},
              {"n_records", summary.n_records},
              {"n_ok", summary.n_ok},
              {"n_failed", summary.n_failed},
              {"failed_ids", summary.failed_ids}}
             .dump(2)
      << '\n';
  return summary;
}

}  // namespace

RunSummary cmd_classify(const RunOptions& options) { return run_and_write(options, RunMode::full); }

RunSummary cmd_extract(const RunOptions& options) {
  return run_and_write(options, RunMode::extract_only);
}

MetricsReport cmd_evaluate(const EvaluateOptions& o) {
  bool binary = o.binary;
  if (o.config_path) binary = binary || load_config(*o.config_path).collapse_debunk;
  const Corpus corpus = load_corpus(o.corpus, LoadMode::strict);

  std::ifstream in(o.verdicts);
  if (!in) throw Error(Errc::FileNotFound, o.verdicts.string());
  std::map<std::string, std::optional<Label>> verdicts;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (collapse_whitespace(raw).empty()) continue;
    try {
      const json j = json::parse(raw);
      std::optional<Label> label;
      if (j.value("status", std::string()) == "ok") label = parse_label(j.at("label").get<std::string>());
      verdicts[j.at("video_id").get<std::string>()] = label;
    } catch (const std::exception& e) {
      throw Error(Errc::MalformedJsonl, "verdicts line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  std::vector<LabelPair> pairs;
  std::vector<std::string> failed;
  for (const auto& r : corpus.records) {
    if (!r.label) continue;
    const auto it = verdicts.find(r.video_id);
    if (it == verdicts.end() || !it->second) {
      failed.push_back(r.video_id);
    } else {
      pairs.emplace_back(*r.label, *it->second);
    }
  }
  MetricsReport report = compute_metrics(pairs, binary);
  report.n_failed = failed.size();
  report.failed_ids = std::move(failed);
  if (o.out_dir) {
    fs::create_directories(*o.out_dir);
    open_out(*o.out_dir / "report.json") << render_report(report, ReportFormat::json);
    open_out(*o.out_dir / "report.md") << render_report(report, ReportFormat::markdown);
  }
  return report;
}

}  // namespace vidcheck::evalcli
