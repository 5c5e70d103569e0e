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

// Library side of the command-line tool. Output layout under --out:
//
//   verdicts.jsonl        one row per record, corpus order (classify)
//   prompts.jsonl         {"video_id","template_version","prompt"} per record
//   artifacts/<id>.json   stage outcomes and intermediates
//   summary.json          counts and failed ids
//   report.json / report.md                                (evaluate)

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vidcheck/backends/backends.hpp"
#include "vidcheck/evalcli/config.hpp"
#include "vidcheck/evalcli/corpus.hpp"
#include "vidcheck/evalcli/metrics.hpp"
#include "vidcheck/evalcli/pipeline.hpp"

namespace vidcheck::evalcli {

struct RunOptions {
  std::filesystem::path corpus;
  std::filesystem::path out_dir;
  std::optional<std::filesystem::path> config_path;
  std::optional<std::string> backend_profile;   // overrides the config
  std::optional<std::string> template_version;  // overrides the config
  std::optional<std::vector<std::string>> adversarial_ids;
  std::size_t jobs = 1;
  bool record_timings = false;
};

struct RunSummary {
  std::size_t n_records = 0;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  std::vector<std::string> failed_ids;
};

// Builds the backend set for a profile. gold feeds the oracle classifier.
backends::Backends make_backends(const BackendSettings& settings, const Corpus& corpus);

// Runs `fn(i)` for i in [0, n) on `jobs` workers.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

std::vector<PipelineResult> run_corpus(const Corpus& corpus, const PipelineConfig& config,
                                       const backends::Backends& backends, RunMode mode,
                                       std::size_t jobs);

RunSummary cmd_classify(const RunOptions& options);
RunSummary cmd_extract(const RunOptions& options);

struct EvaluateOptions {
  std::filesystem::path verdicts;
  std::filesystem::path corpus;  // gold labels
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::filesystem::path> config_path;  // for labels.collapse_debunk
  bool binary = false;
};

MetricsReport cmd_evaluate(const EvaluateOptions& options);

struct GenOptions {
  std::filesystem::path out_dir;
  std::uint64_t seed = 7;
  std::size_t per_class = 10;
};

// Writes corpus.jsonl, frames/, audio/, ocr/ and fixtures.json. Output is a
// pure function of the options.
std::filesystem::path cmd_gen_corpus(const GenOptions& options);

}  // namespace vidcheck::evalcli
