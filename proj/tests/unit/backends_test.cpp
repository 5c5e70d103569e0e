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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "fake_server.hpp"
#include "vidcheck/backends/http_client.hpp"
#include "vidcheck/backends/mocks.hpp"
#include "vidcheck/backends/wire.hpp"
#include "vidcheck/prompt/prompt.hpp"

namespace vidcheck::backends {
namespace {

using nlohmann::json;
using std::chrono::milliseconds;

BackendConfig config_for(const fake::CountingServer& s, int retries = 2) {
  BackendConfig c;
  c.endpoint = s.url();
  c.timeout_ms = 2000;
  c.max_retries = retries;
  c.backoff_base_ms = 1;
  c.max_concurrent_requests = 4;
  return c;
}

template <typename F>
BackendError backend_error(F&& f) {
  try {
    f();
  } catch (const BackendError& e) {
    return e;
  }
  ADD_FAILURE() << "no BackendError";
  return BackendError(Errc::InvalidConfig, "none");
}

TranscriptionRequest one_second_request() {
  TranscriptionRequest r;
  r.video_id = "v1";
  r.audio.sample_rate_hz = 16000;
  r.audio.samples.assign(16000, 0.25);
  return r;
}

json transcript_json() {
  return {{"v", 1}, {"segments", json::array({{{"start_ms", 0}, {"end_ms", 400}, {"text", "hi"}}})}};
}

TEST(Config, Validation) {
  BackendConfig c;
  EXPECT_NO_THROW(validate(c));
  for (auto mutate : std::vector<std::function<void(BackendConfig&)>>{
           [](BackendConfig& b) { b.timeout_ms = 0; }, [](BackendConfig& b) { b.max_retries = -1; },
           [](BackendConfig& b) { b.backoff_base_ms = -1; },
           [](BackendConfig& b) { b.max_concurrent_requests = 0; },
           [](BackendConfig& b) { b.max_prompt_chars = 0; }}) {
    BackendConfig bad;
    mutate(bad);
    try {
      validate(bad);
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvalidConfig);
    }
  }
  EXPECT_THROW(JsonHttpClient(BackendConfig{}), Error);  // no endpoint
}

TEST(Config, EnvironmentOverrides) {
  ::setenv("VIDCHECK_CLASSIFY_URL", "http://classify.example:9000", 1);
  ::setenv("VIDCHECK_BACKEND_TOKEN", "shared", 1);
  ::setenv("VIDCHECK_DESCRIBE_TOKEN", "own", 1);
  const auto c = apply_env(BackendConfig{}, "CLASSIFY");
  const auto d = apply_env(BackendConfig{}, "DESCRIBE");
  EXPECT_EQ(c.endpoint, "http://classify.example:9000");
  EXPECT_EQ(c.auth_token, "shared");
  EXPECT_EQ(d.endpoint, "");
  EXPECT_EQ(d.auth_token, "own");
  ::unsetenv("VIDCHECK_CLASSIFY_URL");
  ::unsetenv("VIDCHECK_BACKEND_TOKEN");
  ::unsetenv("VIDCHECK_DESCRIBE_TOKEN");
}

TEST(Backoff, ExponentialWithBoundedJitter) {
  EXPECT_EQ(backoff_delay(0, 100, 0.0), milliseconds(100));
  EXPECT_EQ(backoff_delay(1, 100, 0.0), milliseconds(200));
  EXPECT_EQ(backoff_delay(3, 100, 0.0), milliseconds(800));
  EXPECT_EQ(backoff_delay(2, 100, 1.0), milliseconds(480));
  EXPECT_EQ(backoff_delay(2, 100, -1.0), milliseconds(320));
  EXPECT_EQ(backoff_delay(2, 100, 5.0), milliseconds(480));
  EXPECT_EQ(backoff_delay(0, 0, 0.3), milliseconds(0));
}

TEST(Transcribe, RetriesServerErrorsThenSucceeds) {
  fake::CountingServer s([](int hit, const json&) {
    return hit <= 2 ? fake::Reply{500, "{}"} : fake::Reply{200, transcript_json().dump()};
  });
  HttpTranscriber t(config_for(s, 2));
  const auto r = t.transcribe(one_second_request());
  ASSERT_EQ(r.segments.size(), 1u);
  EXPECT_EQ(r.segments[0], (TranscriptSegment{0, 400, "hi"}));
  EXPECT_EQ(s.hits(), 3);
  EXPECT_EQ(s.routes(), std::vector<std::string>(3, "/transcribe"));
}

TEST(Transcribe, ExhaustedServerErrorsKeepStatus) {
  fake::CountingServer s([](int, const json&) { return fake::Reply{503, "{}"}; });
  HttpTranscriber t(config_for(s, 3));
  const auto e = backend_error([&] { t.transcribe(one_second_request()); });
  EXPECT_EQ(e.code(), Errc::ServiceError);
  EXPECT_EQ(e.status(), 503);
  EXPECT_EQ(e.attempts(), 4);
  EXPECT_EQ(s.hits(), 4);
}

TEST(Transcribe, TimeoutOnEveryAttempt) {
  fake::CountingServer s([](int, const json&) { return fake::Reply{200, transcript_json().dump(), milliseconds(400)}; });
  auto c = config_for(s, 2);
  c.timeout_ms = 100;
  HttpTranscriber t(c);
  const auto e = backend_error([&] { t.transcribe(one_second_request()); });
  EXPECT_EQ(e.code(), Errc::Timeout);
  EXPECT_EQ(e.attempts(), 3);
  EXPECT_EQ(s.hits(), 3);
}

TEST(Transcribe, ClientErrorsAreFinal) {
  fake::CountingServer s([](int, const json&) { return fake::Reply{404, "{}"}; });
  HttpTranscriber t(config_for(s, 5));
  const auto e = backend_error([&] { t.transcribe(one_second_request()); });
  EXPECT_EQ(e.code(), Errc::ServiceError);
  EXPECT_EQ(e.status(), 404);
  EXPECT_EQ(e.attempts(), 1);
  EXPECT_EQ(s.hits(), 1);
}

TEST(Transcribe, TooManyRequestsIsRetried) {
  fake::CountingServer s([](int hit, const json&) {
    return hit == 1 ? fake::Reply{429, "{}"} : fake::Reply{200, transcript_json().dump()};
  });
  HttpTranscriber t(config_for(s, 1));
  EXPECT_EQ(t.transcribe(one_second_request()).segments.size(), 1u);
  EXPECT_EQ(s.hits(), 2);
}

TEST(Transcribe, MalformedBodiesAreDistinguished) {
  for (const std::string body :
       {std::string("not json"), json{{"v", 2}, {"segments", json::array()}}.dump(),
        json{{"v", 1}}.dump(),
        json{{"v", 1}, {"segments", json::array({{{"start_ms", 500}, {"end_ms", 100}, {"text", "x"}}})}}.dump(),
        json{{"v", 1},
             {"segments", json::array({{{"start_ms", 500}, {"end_ms", 600}, {"text", "x"}},
                                       {{"start_ms", 100}, {"end_ms", 200}, {"text", "y"}}})}}
            .dump(),
        json{{"v", 1}, {"segments", json::array({{{"start_ms", 0}, {"end_ms", 5000}, {"text", "x"}}})}}.dump()}) {
    fake::CountingServer s([&](int, const json&) { return fake::Reply{200, body}; });
    HttpTranscriber t(config_for(s, 3));
    const auto e = backend_error([&] { t.transcribe(one_second_request()); });
    EXPECT_EQ(e.code(), Errc::MalformedResponse) << body;
    EXPECT_EQ(s.hits(), 1) << body;
  }
}

TEST(Transcribe, WireCarriesPcmAndTokens) {
  json seen;
  std::mutex m;
  fake::CountingServer s([&](int, const json& req) {
    std::lock_guard lock(m);
    seen = req;
    return fake::Reply{200, transcript_json().dump()};
  });
  auto c = config_for(s);
  c.auth_token = "tok";
  c.endpoint += "/";
  HttpTranscriber t(c);
  auto req = one_second_request();
  req.language_hint = "en";
  t.transcribe(req);
  EXPECT_EQ(seen["v"], 1);
  EXPECT_EQ(seen["video_id"], "v1");
  EXPECT_EQ(seen["language"], "en");
  EXPECT_EQ(seen["sample_rate_hz"], 16000);
  EXPECT_EQ(seen["encoding"], "pcm_s16le");
  // 32000 bytes of PCM encode to ceil(32000 / 3) * 4 base64 characters.
  EXPECT_EQ(seen["audio_b64"].get<std::string>().size(), 42668u);
  EXPECT_EQ(s.auth_headers().at(0), "Bearer tok");
}

DescriptionRequest two_segments() {
  DescriptionRequest r;
  r.video_id = "v1";
  Frame f;
  f.width = 2;
  f.height = 1;
  f.pixels = {10, 20};
  r.segments = {{0, {f}}, {1, {f, f}}};
  return r;
}

json descriptions_json(std::vector<std::size_t> idx) {
  json d = json::array();
  for (auto i : idx) d.push_back({{"segment_index", i}, {"text", "seg " + std::to_string(i)}});
  return {{"v", 1}, {"descriptions", d}};
}

TEST(Describe, RetriesThenSucceeds) {
  json seen;
  fake::CountingServer s([&](int hit, const json& req) {
    if (hit == 3) seen = req;
    return hit <= 2 ? fake::Reply{500, "{}"} : fake::Reply{200, descriptions_json({0, 1}).dump()};
  });
  HttpDescriber d(config_for(s, 2));
  const auto r = d.describe_frames(two_segments());
  EXPECT_EQ(r.descriptions.at(0), "seg 0");
  EXPECT_EQ(r.descriptions.at(1), "seg 1");
  EXPECT_EQ(s.hits(), 3);
  ASSERT_EQ(seen["segments"].size(), 2u);
  EXPECT_EQ(seen["segments"][1]["frames"].size(), 2u);
  EXPECT_EQ(seen["segments"][0]["frames"][0]["encoding"], "gray8");
  EXPECT_EQ(seen["segments"][0]["frames"][0]["pixels_b64"], "ChQ=");
}

TEST(Describe, TimeoutAndIncompleteAnswers) {
  {
    fake::CountingServer s([](int, const json&) {
      return fake::Reply{200, descriptions_json({0, 1}).dump(), milliseconds(400)};
    });
    auto c = config_for(s, 1);
    c.timeout_ms = 100;
    HttpDescriber d(c);
    const auto e = backend_error([&] { d.describe_frames(two_segments()); });
    EXPECT_EQ(e.code(), Errc::Timeout);
    EXPECT_EQ(s.hits(), 2);
  }
  for (const auto& idx : {std::vector<std::size_t>{0}, std::vector<std::size_t>{0, 1, 2},
                          std::vector<std::size_t>{0, 0, 1}}) {
    fake::CountingServer s([&](int, const json&) { return fake::Reply{200, descriptions_json(idx).dump()}; });
    HttpDescriber d(config_for(s));
    EXPECT_EQ(backend_error([&] { d.describe_frames(two_segments()); }).code(), Errc::MalformedResponse);
  }
  fake::CountingServer s([](int, const json&) { return fake::Reply{200, descriptions_json({0}).dump()}; });
  HttpDescriber d(config_for(s));
  auto empty = two_segments();
  empty.segments[1].frames.clear();
  try {
    d.describe_frames(empty);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyInput);
  }
  EXPECT_EQ(s.hits(), 0);
}

ClassifyRequest classify_request(std::string prompt) {
  return {"v1", "v1", std::move(prompt)};
}

TEST(Classify, ReturnsRawOutputVerbatim) {
  fake::CountingServer s([](int, const json&) { return fake::Reply{200, fake::classify_ok("LABEL: fake\nREASON: x")}; });
  HttpClassifier c(config_for(s));
  EXPECT_EQ(c.classify(classify_request("prompt")).raw, "LABEL: fake\nREASON: x");
}

TEST(Classify, EmptyOutputIsMalformed) {
  fake::CountingServer s([](int, const json&) { return fake::Reply{200, fake::classify_ok("")}; });
  HttpClassifier c(config_for(s));
  EXPECT_EQ(backend_error([&] { c.classify(classify_request("prompt")); }).code(), Errc::MalformedResponse);
}

TEST(Classify, OversizedPromptRejectedBeforeSend) {
  fake::CountingServer s([](int, const json&) { return fake::Reply{200, fake::classify_ok("LABEL: real")}; });
  HttpClassifier c(config_for(s));
  const auto e = backend_error([&] { c.classify(classify_request(std::string(1000000, 'x'))); });
  EXPECT_EQ(e.code(), Errc::PromptTooLarge);
  EXPECT_EQ(s.hits(), 0);
  // Exactly at the limit is fine.
  EXPECT_EQ(c.classify(classify_request(std::string(c.client().config().max_prompt_chars, 'x'))).raw, "LABEL: real");
  // Budgets count code points, not bytes.
  auto cfg = config_for(s);
  cfg.max_prompt_chars = 3;
  HttpClassifier small(cfg);
  EXPECT_NO_THROW(small.classify(classify_request("\xe2\x82\xac\xe2\x82\xac\xe2\x82\xac")));
  EXPECT_EQ(backend_error([&] { small.classify(classify_request("abcd")); }).code(), Errc::PromptTooLarge);
}

TEST(Classify, BackoffGrowsGeometrically) {
  fake::CountingServer s([](int, const json&) { return fake::Reply{500, "{}"}; });
  auto cfg = config_for(s, 3);
  cfg.backoff_base_ms = 60;
  cfg.jitter_seed = 99;
  HttpClassifier c(cfg);
  EXPECT_EQ(backend_error([&] { c.classify(classify_request("p")); }).attempts(), 4);
  const auto t = s.arrivals();
  ASSERT_EQ(t.size(), 4u);
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double gap = std::chrono::duration<double, std::milli>(t[k] - t[k - 1]).count();
    const double nominal = 60.0 * (1 << (k - 1));
    EXPECT_GE(gap, 0.8 * nominal - 1.0) << k;
    EXPECT_LE(gap, 1.2 * nominal + 80.0) << k;
  }
}

TEST(Classify, InFlightNeverExceedsCap) {
  fake::CountingServer s([](int, const json&) { return fake::Reply{200, fake::classify_ok("LABEL: real"), milliseconds(25)}; });
  auto cfg = config_for(s);
  cfg.max_concurrent_requests = 3;
  HttpClassifier c(cfg);
  std::vector<std::jthread> callers;
  std::atomic<int> ok{0};
  for (int i = 0; i < 24; ++i) {
    callers.emplace_back([&] {
      for (int k = 0; k < 3; ++k) {
        if (c.classify(classify_request("p")).raw == "LABEL: real") ++ok;
      }
    });
  }
  callers.clear();
  EXPECT_EQ(ok.load(), 72);
  EXPECT_EQ(s.hits(), 72);
  EXPECT_LE(s.peak_in_flight(), 3);
  EXPECT_GE(s.peak_in_flight(), 2);
  EXPECT_LE(c.client().limiter().peak_in_flight(), 3);
  EXPECT_EQ(c.client().limiter().in_flight(), 0);
}

TEST(Classify, AuditLogRecordsEveryAttempt) {
  const auto path = std::filesystem::temp_directory_path() / "vidcheck_audit_test.jsonl";
  std::filesystem::remove(path);
  {
    fake::CountingServer s([](int hit, const json&) {
      return hit == 1 ? fake::Reply{502, "{}"} : fake::Reply{200, fake::classify_ok("LABEL: debunk")};
    });
    auto cfg = config_for(s);
    cfg.audit_path = path;
    HttpClassifier c(cfg);
    c.classify(classify_request("p"));
  }
  std::ifstream in(path);
  std::vector<json> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(json::parse(l));
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0]["attempt"], 1);
  EXPECT_EQ(lines[0]["status"], 502);
  EXPECT_EQ(lines[0]["outcome"], "ServiceError");
  EXPECT_EQ(lines[1]["attempt"], 2);
  EXPECT_EQ(lines[1]["outcome"], "ok");
  EXPECT_EQ(lines[1]["route"], "/classify");
  EXPECT_EQ(lines[1]["video_id"], "v1");
  std::filesystem::remove(path);
}

TEST(Limiter, PermitsAreCounted) {
  ConcurrencyLimiter l(2);
  {
    ConcurrencyLimiter::Permit a(l);
    ConcurrencyLimiter::Permit b(l);
    EXPECT_EQ(l.in_flight(), 2);
  }
  EXPECT_EQ(l.in_flight(), 0);
  EXPECT_EQ(l.peak_in_flight(), 2);
}

TEST(Wire, RoundTrips) {
  TranscriptionResponse tr{{{0, 10, "a"}, {20, 30, "b"}}};
  EXPECT_EQ(wire::transcription_response_from_json(wire::to_json(tr)).segments, tr.segments);
  DescriptionResponse dr{{{0, "x"}, {3, "y"}}};
  EXPECT_EQ(wire::description_response_from_json(wire::to_json(dr)).descriptions, dr.descriptions);
  const ClassifyRequest cr{"id", "v1", "hello"};
  const auto back = wire::classify_request_from_json(wire::to_json(cr));
  EXPECT_EQ(back.video_id, "id");
  EXPECT_EQ(back.template_version, "v1");
  EXPECT_EQ(back.prompt, "hello");
  EXPECT_EQ(wire::classify_response_from_json(wire::to_json(ClassifyResponse{"LABEL: real"})).raw, "LABEL: real");
}

std::shared_ptr<FixtureSet> sample_fixtures() {
  auto f = std::make_shared<FixtureSet>();
  Fixture v1;
  v1.transcript = {{0, 500, "hello"}};
  v1.descriptions[1] = "canned";
  f->videos["v1"] = v1;
  Fixture v2;
  v2.classify_output = "LABEL: debunk";
  f->videos["v2"] = v2;
  return f;
}

TEST(Mocks, FixtureTranscriber) {
  FixtureTranscriber t(sample_fixtures());
  EXPECT_EQ(t.transcribe(one_second_request()).segments, (std::vector<TranscriptSegment>{{0, 500, "hello"}}));
  auto other = one_second_request();
  other.video_id = "v2";
  EXPECT_TRUE(t.transcribe(other).segments.empty());
  other.video_id = "missing";
  const auto e = backend_error([&] { t.transcribe(other); });
  EXPECT_EQ(e.code(), Errc::ServiceError);
  EXPECT_EQ(e.status(), 404);
}

TEST(Mocks, FixtureDescriber) {
  FixtureDescriber d(sample_fixtures());
  const auto r = d.describe_frames(two_segments());
  EXPECT_EQ(r.descriptions.at(0), "1 keyframe(s); mean luminance 15.0; range 10-20");
  EXPECT_EQ(r.descriptions.at(1), "canned");
}

TEST(Mocks, FixtureClassifierIsPure) {
  FixtureClassifier a(sample_fixtures()), b(sample_fixtures());
  EXPECT_EQ(a.classify({"v2", "v1", "p"}).raw, "LABEL: debunk");
  for (int i = 0; i < 20; ++i) {
    const auto req = classify_request("prompt " + std::to_string(i));
    const auto out = a.classify(req).raw;
    EXPECT_EQ(out, b.classify(req).raw);
    EXPECT_NO_THROW(prompt::parse_verdict(out));
  }
}

TEST(Mocks, OracleAndAdversarial) {
  auto oracle = std::make_shared<OracleClassifier>(std::map<std::string, Label>{{"v1", Label::fake}, {"v2", Label::real}});
  EXPECT_EQ(oracle->classify(classify_request("p")).raw, "LABEL: fake");
  EXPECT_EQ(prompt::parse_verdict(oracle->classify(classify_request("p")).raw).label, Label::fake);
  EXPECT_EQ(backend_error([&] { oracle->classify({"zzz", "v1", "p"}); }).status(), 404);

  AdversarialClassifier garbage(oracle, {"v1"}, AdversarialMode::garbage);
  const auto raw = garbage.classify(classify_request("p")).raw;
  EXPECT_EQ(raw, "???");
  try {
    prompt::parse_verdict(raw);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnparseableVerdict);
  }
  EXPECT_EQ(garbage.classify({"v2", "v1", "p"}).raw, "LABEL: real");

  AdversarialClassifier slow(oracle, {"v1"}, AdversarialMode::timeout, milliseconds(5));
  EXPECT_EQ(backend_error([&] { slow.classify(classify_request("p")); }).code(), Errc::Timeout);
  AdversarialClassifier broken(oracle, {"v1"}, AdversarialMode::server_error);
  const auto e = backend_error([&] { broken.classify(classify_request("p")); });
  EXPECT_EQ(e.code(), Errc::ServiceError);
  EXPECT_EQ(e.status(), 500);
}

TEST(Mocks, FixtureFileRoundTrip) {
  const auto f = sample_fixtures();
  const auto path = std::filesystem::temp_directory_path() / "vidcheck_fixtures_test.json";
  save_fixtures(*f, path);
  const auto back = load_fixtures(path);
  EXPECT_EQ(to_json(back), to_json(*f));
  EXPECT_EQ(back.find("v1")->descriptions.at(1), "canned");
  EXPECT_EQ(back.find("nope"), nullptr);
  std::filesystem::remove(path);
  try {
    fixtures_from_json(json{{"v", 1}, {"videos", 3}});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedFile);
  }
}

}  // namespace
}  // namespace vidcheck::backends
