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

// In-process backends for tests and offline runs. Every mock is a pure
// function of its construction data and the request.

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "vidcheck/backends/backends.hpp"
#include "vidcheck/core/types.hpp"

namespace vidcheck::backends {

struct Fixture {
  std::vector<TranscriptSegment> transcript;
  std::map<std::size_t, std::string> descriptions;
  std::optional<std::string> classify_output;
};

// fixtures.json:
//   {"v":1, "videos": {"<id>": {"transcript": [{"start_ms","end_ms","text"}],
//                               "descriptions": {"<segment>": "text"},
//                               "classify": "LABEL: fake"}}}
// All per-video keys are optional.
struct FixtureSet {
  std::map<std::string, Fixture> videos;

  const Fixture* find(const std::string& video_id) const;
};

FixtureSet fixtures_from_json(const nlohmann::json& j);  // throws MalformedFile
nlohmann::json to_json(const FixtureSet& fixtures);
FixtureSet load_fixtures(const std::filesystem::path& path);
void save_fixtures(const FixtureSet& fixtures, const std::filesystem::path& path);

// Unknown ids get ServiceError 404. A known id without a transcript gets an
// empty one.
class FixtureTranscriber final : public TranscriptionBackend {
 public:
  explicit FixtureTranscriber(std::shared_ptr<const FixtureSet> fixtures);
  TranscriptionResponse transcribe(const TranscriptionRequest& request) override;

 private:
  std::shared_ptr<const FixtureSet> fixtures_;
};

// Segments without a canned text are described from pixel statistics.
class FixtureDescriber final : public DescriptionBackend {
 public:
  explicit FixtureDescriber(std::shared_ptr<const FixtureSet> fixtures);
  DescriptionResponse describe_frames(const DescriptionRequest& request) override;

 private:
  std::shared_ptr<const FixtureSet> fixtures_;
};

// Canned output when present, otherwise a verdict derived from a hash of the
// prompt text.
class FixtureClassifier final : public ClassifierBackend {
 public:
  explicit FixtureClassifier(std::shared_ptr<const FixtureSet> fixtures);
  ClassifyResponse classify(const ClassifyRequest& request) override;

 private:
  std::shared_ptr<const FixtureSet> fixtures_;
};

// Deterministic one-line description of a segment's frames.
std::string describe_pixels(const SegmentFrames& segment);

// Answers with the planted gold label.
class OracleClassifier final : public ClassifierBackend {
 public:
  explicit OracleClassifier(std::map<std::string, Label> gold);
  ClassifyResponse classify(const ClassifyRequest& request) override;

 private:
  std::map<std::string, Label> gold_;
};

enum class AdversarialMode { garbage, timeout, server_error };

// Misbehaves for targeted ids and delegates the rest. garbage answers "???",
// timeout sleeps `delay` then throws Timeout, server_error throws
// ServiceError 500.
class AdversarialClassifier final : public ClassifierBackend {
 public:
  AdversarialClassifier(std::shared_ptr<ClassifierBackend> inner,
                        std::set<std::string> targets, AdversarialMode mode,
                        std::chrono::milliseconds delay = std::chrono::milliseconds(0));
  ClassifyResponse classify(const ClassifyRequest& request) override;

 private:
  std::shared_ptr<ClassifierBackend> inner_;
  std::set<std::string> targets_;
  AdversarialMode mode_;
  std::chrono::milliseconds delay_;
};

}  // namespace vidcheck::backends
