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

#include "vidcheck/evalcli/pipeline.hpp"

#include <chrono>
#include <cmath>

#include <nlohmann/json.hpp>

#include "vidcheck/audio/audio.hpp"
#include "vidcheck/core/text.hpp"

namespace vidcheck::evalcli {

using nlohmann::json;

std::string_view to_string(Stage stage) noexcept {
  switch (stage) {
    case Stage::validate: return "validate";
    case Stage::segment_plan: return "segment_plan";
    case Stage::frame_selection: return "frame_selection";
    case Stage::similarity_filter: return "similarity_filter";
    case Stage::ocr_merge: return "ocr_merge";
    case Stage::audio_features: return "audio_features";
    case Stage::transcribe: return "transcribe";
    case Stage::describe: return "describe";
    case Stage::metadata: return "metadata";
    case Stage::assemble: return "assemble";
    case Stage::classify: return "classify";
    case Stage::parse: return "parse";
  }
  return "?";
}

bool is_mandatory(Stage stage) noexcept {
  switch (stage) {
    case Stage::ocr_merge:
    case Stage::audio_features:
    case Stage::transcribe:
    case Stage::describe:
      return false;
    default:
      return true;
  }
}

std::string_view to_string(StageStatus status) noexcept {
  switch (status) {
    case StageStatus::ok: return "ok";
    case StageStatus::skipped: return "skipped";
    case StageStatus::failed: return "failed";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

class Runner {
 public:
  explicit Runner(PipelineResult& result) : result_(result) {}

  // false when a mandatory stage failed.
  template <typename F>
  bool run(Stage stage, F&& body) {
    StageOutcome outcome;
    outcome.stage = stage;
    const auto start = Clock::now();
    try {
      if (!body()) outcome.status = StageStatus::skipped;
    } catch (const Error& e) {
      outcome.status = StageStatus::failed;
      outcome.error = e.code();
      outcome.message = e.what();
    } catch (const std::exception& e) {
      outcome.status = StageStatus::failed;
      outcome.message = e.what();
    }
    outcome.elapsed_ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    const bool fatal = outcome.status == StageStatus::failed && is_mandatory(stage);
    result_.stages.push_back(std::move(outcome));
    if (fatal) result_.failed_stage = stage;
    return !fatal;
  }

 private:
  PipelineResult& result_;
};

textline::Transcript to_transcript(const backends::TranscriptionResponse& response) {
  textline::Transcript t;
  t.source = textline::TranscriptSource::audio;
  for (const auto& seg : response.segments) {
    std::string text = textline::normalize_text(seg.text);
    if (text.empty()) continue;
    t.lines.push_back({std::move(text), seg.start_ms, seg.end_ms});
  }
  return t;
}

}  // namespace

PipelineResult run_pipeline(const PipelineInput& input, const PipelineConfig& config,
                            const prompt::PromptTemplate& tmpl,
                            const backends::Backends& bk, RunMode mode) {
  const VideoRecord& rec = input.record;
  PipelineResult result;
  result.video_id = rec.video_id;
  Artifacts& art = result.artifacts;
  Runner stages(result);

  if (!stages.run(Stage::validate, [&] {
        const auto v = validate_record(rec);
        if (!v.ok()) {
          std::string msg;
          for (const auto& s : v.violations) msg += (msg.empty() ? "" : "; ") + s;
          throw Error(Errc::InvalidInstance, msg);
        }
        return true;
      })) {
    return result;
  }

  if (!stages.run(Stage::segment_plan, [&] {
        art.plan = keyframe::plan_segments(inferred_duration_s(rec),
                                           config.keyframe.segment_duration_s);
        return true;
      })) {
    return result;
  }

  if (!stages.run(Stage::frame_selection, [&] {
        const auto& bounds = art.plan->boundaries;
        for (std::size_t s = 0; s < bounds.size(); ++s) {
          const auto [a, b] =
              keyframe::frames_in_segment(rec.frames, bounds[s], s + 1 == bounds.size());
          SegmentArtifacts seg;
          seg.segment_index = s;
          if (b > a) {
            seg.selected = keyframe::select_uniform_frames(static_cast<std::int64_t>(a),
                                                           static_cast<std::int64_t>(b),
                                                           config.keyframe.frames_per_segment)
                               .frame_ids;
          }
          art.segments.push_back(std::move(seg));
        }
        return true;
      })) {
    return result;
  }

  if (!stages.run(Stage::similarity_filter, [&] {
        for (auto& seg : art.segments) {
          std::vector<Frame> picked;
          picked.reserve(seg.selected.size());
          for (auto pos : seg.selected) picked.push_back(rec.frames[static_cast<std::size_t>(pos)]);
          for (auto i : keyframe::filter_similar_frames(picked, config.keyframe.filter)) {
            seg.keyframes.push_back(picked[i].index);
          }
        }
        return true;
      })) {
    return result;
  }

  stages.run(Stage::ocr_merge, [&] {
    if (!rec.subtitles_embedded || input.ocr.empty()) return false;
    art.ocr = textline::merge_subtitle_lines(input.ocr, config.textline);
    return true;
  });

  std::optional<AudioSignal> audio16;
  stages.run(Stage::audio_features, [&] {
    if (!rec.audio) return false;
    audio16 = audio::preprocess_audio(*rec.audio);
    const auto spec = audio::mel_spectrogram(*audio16, config.mel);
    MelSummary summary{spec.frames, spec.n_mels, std::vector<double>(spec.n_mels, 0.0)};
    for (std::size_t t = 0; t < spec.frames; ++t) {
      for (std::size_t m = 0; m < spec.n_mels; ++m) {
        summary.mean_log_energy[m] += std::log(1e-10 + spec.at(t, m));
      }
    }
    for (double& v : summary.mean_log_energy) v /= static_cast<double>(spec.frames);
    art.mel = std::move(summary);
    return true;
  });

  stages.run(Stage::transcribe, [&] {
    if (!rec.audio || !bk.transcriber) return false;
    if (!audio16) audio16 = audio::preprocess_audio(*rec.audio);
    backends::TranscriptionRequest req{rec.video_id, "auto", *audio16};
    art.audio = to_transcript(bk.transcriber->transcribe(req));
    return true;
  });

  stages.run(Stage::describe, [&] {
    backends::DescriptionRequest req{rec.video_id, {}};
    for (const auto& seg : art.segments) {
      if (seg.keyframes.empty()) continue;
      backends::SegmentFrames group{seg.segment_index, {}};
      for (auto idx : seg.keyframes) {
        // Frame::index is position for corpus-loaded records but not in general.
        for (const Frame& f : rec.frames) {
          if (f.index == idx) {
            group.frames.push_back(f);
            break;
          }
        }
      }
      req.segments.push_back(std::move(group));
    }
    if (req.segments.empty() || !bk.describer) return false;
    const auto resp = bk.describer->describe_frames(req);
    for (const auto& [idx, text] : resp.descriptions) {
      std::string clean = collapse_whitespace(text);
      if (!clean.empty()) art.descriptions.push_back({idx, std::move(clean)});
    }
    return true;
  });

  if (!stages.run(Stage::metadata, [&] {
        art.metadata = prompt::format_metadata(rec.metadata, config.prompt.max_comments);
        return true;
      })) {
    return result;
  }

  if (!stages.run(Stage::assemble, [&] {
        prompt::PromptInputs in;
        in.title = rec.title;
        if (art.ocr) in.ocr = *art.ocr;
        if (art.audio) in.audio = *art.audio;
        in.visual = art.descriptions;
        in.metadata = *art.metadata;
        art.prompt = prompt::assemble_prompt(in, tmpl);
        return true;
      })) {
    return result;
  }
  if (mode == RunMode::extract_only) return result;

  if (!stages.run(Stage::classify, [&] {
        if (!bk.classifier) throw Error(Errc::InvalidConfig, "no classifier backend");
        backends::ClassifyRequest req{rec.video_id, art.prompt->template_version,
                                      art.prompt->text};
        art.raw_output = bk.classifier->classify(req).raw;
        return true;
      })) {
    return result;
  }

  stages.run(Stage::parse, [&] {
    auto verdict = prompt::parse_verdict(*art.raw_output);
    if (config.collapse_debunk) verdict.label = collapse_to_binary(verdict.label);
    result.verdict = std::move(verdict);
    return true;
  });
  return result;
}

namespace {

json transcript_json(const textline::Transcript& t) {
  json lines = json::array();
  for (const auto& l : t.lines) {
    lines.push_back({{"start_ms", l.start_ms}, {"end_ms", l.end_ms}, {"text", l.text}});
  }
  return {{"source", textline::to_string(t.source)}, {"lines", std::move(lines)}};
}

}  // namespace

json artifacts_to_json(const PipelineResult& r) {
  const Artifacts& a = r.artifacts;
  json stages = json::array();
  for (const auto& s : r.stages) {
    json j{{"stage", to_string(s.stage)}, {"status", to_string(s.status)}};
    if (s.error) j["error"] = errc_name(*s.error);
    if (!s.message.empty()) j["message"] = s.message;
    stages.push_back(std::move(j));
  }
  json out{{"v", 1}, {"video_id", r.video_id}, {"stages", std::move(stages)}};
  if (a.plan) {
    json bounds = json::array();
    for (const auto& b : a.plan->boundaries) bounds.push_back({b.start_s, b.end_s});
    out["segment_plan"] = {{"total_duration_s", a.plan->total_duration_s},
                           {"segment_duration_s", a.plan->segment_duration_s},
                           {"segment_count", a.plan->segment_count},
                           {"boundaries_s", std::move(bounds)}};
  }
  json segs = json::array();
  for (const auto& s : a.segments) {
    segs.push_back({{"segment_index", s.segment_index},
                    {"selected", s.selected},
                    {"keyframes", s.keyframes}});
  }
  out["segments"] = std::move(segs);
  if (a.ocr) out["ocr_transcript"] = transcript_json(*a.ocr);
  if (a.mel) {
    out["mel"] = {{"frames", a.mel->frames},
                  {"n_mels", a.mel->n_mels},
                  {"mean_log_energy", a.mel->mean_log_energy}};
  }
  if (a.audio) out["audio_transcript"] = transcript_json(*a.audio);
  json desc = json::array();
  for (const auto& d : a.descriptions) desc.push_back({{"segment_index", d.segment_index}, {"text", d.text}});
  out["visual_descriptions"] = std::move(desc);
  if (a.metadata) {
    out["metadata_block"] = {{"text", a.metadata->text},
                             {"comments_dropped", a.metadata->comments_dropped}};
  }
  if (a.prompt) {
    json dropped = json::object();
    for (const auto& [s, n] : a.prompt->chars_dropped) dropped[std::string(prompt::to_string(s))] = n;
    out["prompt"] = {{"template_version", a.prompt->template_version},
                     {"text", a.prompt->text},
                     {"chars_dropped", std::move(dropped)},
                     {"comments_dropped", a.prompt->comments_dropped}};
  }
  if (a.raw_output) out["raw_output"] = *a.raw_output;
  return out;
}

json verdict_to_json(const PipelineResult& r, const std::string& template_version,
                     bool with_timings) {
  json j{{"video_id", r.video_id}};
  if (r.verdict) {
    j["status"] = "ok";
    j["label"] = to_string(r.verdict->label);
    j["rationale"] = r.verdict->rationale ? json(*r.verdict->rationale) : json(nullptr);
  } else {
    j["status"] = "unavailable";
    j["label"] = nullptr;
    j["rationale"] = nullptr;
    j["failed_stage"] = r.failed_stage ? json(to_string(*r.failed_stage)) : json(nullptr);
    for (const auto& s : r.stages) {
      if (r.failed_stage && s.stage == *r.failed_stage) {
        j["error"] = s.error ? json(errc_name(*s.error)) : json("Unknown");
        j["message"] = s.message;
      }
    }
  }
  j["template_version"] = r.artifacts.prompt ? r.artifacts.prompt->template_version : template_version;
  if (with_timings) {
    json t = json::object();
    for (const auto& s : r.stages) t[std::string(to_string(s.stage))] = s.elapsed_ms;
    j["timings_ms"] = std::move(t);
  }
  return j;
}

}  // namespace vidcheck::evalcli
