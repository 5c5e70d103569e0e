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

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "vidcheck/evalcli/commands.hpp"
#include "vidcheck/simd/kernels.hpp"

namespace ev = vidcheck::evalcli;

namespace {

std::vector<std::string> split_ids(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  for (std::string id; std::getline(ss, id, ',');) {
    if (!id.empty()) out.push_back(id);
  }
  return out;
}

void print_summary(const ev::RunSummary& s) {
  std::cout << "records: " << s.n_records << ", ok: " << s.n_ok << ", failed: " << s.n_failed
            << "\n";
  for (const auto& id : s.failed_ids) std::cout << "  failed: " << id << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vidcheck: multimodal short-video verdict pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "vidcheck 0.1.0");

  ev::RunOptions run;
  std::string config, profile, template_version, adversarial_ids;
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", run.corpus, "Corpus JSONL")->required();
    cmd->add_option("--out", run.out_dir, "Output directory")->required();
    cmd->add_option("--config", config, "TOML config");
    cmd->add_option("--backend-profile", profile, "fixture | oracle | adversarial | http");
    cmd->add_option("--template-version", template_version, "Built-in template version");
    cmd->add_option("--jobs", run.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--adversarial-ids", adversarial_ids, "Comma-separated ids to sabotage");
  };

  auto* classify = app.add_subcommand("classify", "Run the full pipeline, write verdicts JSONL");
  add_run_flags(classify);
  classify->add_flag("--record-timings", run.record_timings, "Add per-stage timings to verdicts");

  auto* extract = app.add_subcommand("extract", "Run extraction and prompt assembly only");
  add_run_flags(extract);

  ev::EvaluateOptions eval;
  std::string eval_out, eval_config, format = "markdown";
  auto* evaluate = app.add_subcommand("evaluate", "Score verdicts against corpus gold labels");
  evaluate->add_option("--verdicts", eval.verdicts, "Verdicts JSONL")->required();
  evaluate->add_option("--corpus", eval.corpus, "Corpus JSONL with labels")->required();
  evaluate->add_option("--out", eval_out, "Write report.json and report.md here");
  evaluate->add_option("--config", eval_config, "TOML config (labels.collapse_debunk)");
  evaluate->add_flag("--binary", eval.binary, "Collapse debunk onto real");
  evaluate->add_option("--format", format, "Stdout format: markdown | json")
      ->check(CLI::IsMember({"markdown", "json"}));

  ev::GenOptions gen;
  auto* gen_corpus = app.add_subcommand("gen-corpus", "Write a synthetic labeled corpus");
  gen_corpus->add_option("--out", gen.out_dir, "Output directory")->required();
  gen_corpus->add_option("--seed", gen.seed, "RNG seed");
  gen_corpus->add_option("--per-class", gen.per_class, "Records per label")
      ->check(CLI::PositiveNumber);

  app.add_subcommand("isa", "Print the active SIMD kernel variant");

  CLI11_PARSE(app, argc, argv);

  auto finish_run_options = [&] {
    if (!config.empty()) run.config_path = config;
    if (!profile.empty()) run.backend_profile = profile;
    if (!template_version.empty()) run.template_version = template_version;
    if (!adversarial_ids.empty()) run.adversarial_ids = split_ids(adversarial_ids);
  };

  try {
    if (classify->parsed()) {
      finish_run_options();
      print_summary(ev::cmd_classify(run));
    } else if (extract->parsed()) {
      finish_run_options();
      print_summary(ev::cmd_extract(run));
    } else if (evaluate->parsed()) {
      if (!eval_out.empty()) eval.out_dir = eval_out;
      if (!eval_config.empty()) eval.config_path = eval_config;
      const auto report = ev::cmd_evaluate(eval);
      std::cout << ev::render_report(report, format == "json" ? ev::ReportFormat::json
                                                              : ev::ReportFormat::markdown);
    } else if (gen_corpus->parsed()) {
      std::cout << ev::cmd_gen_corpus(gen).string() << "\n";
    } else {
      std::cout << vidcheck::simd::isa_name(vidcheck::simd::active().isa) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "vidcheck: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
