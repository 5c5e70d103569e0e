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

#include <algorithm>

#include "vidcheck/core/text.hpp"
#include "vidcheck/core/types.hpp"
#include "vidcheck/error.hpp"

namespace vidcheck {
namespace {

bool has(const ValidationResult& r, const std::string& needle) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

VideoRecord good_record() {
  VideoRecord r;
  r.video_id = "v1";
  r.title = "t";
  for (std::uint32_t i = 0; i < 3; ++i) {
    r.frames.push_back({i, static_cast<std::int64_t>(i) * 1000, 2, 2, {1, 2, 3, 4}});
  }
  r.metadata = {1700000000, 3, 10, "someone", {"a", "b"}};
  return r;
}

TEST(Label, ParsesCaseInsensitively) {
  EXPECT_EQ(parse_label("FAKE"), Label::fake);
  EXPECT_EQ(parse_label("Real"), Label::real);
  EXPECT_EQ(parse_label("debunk"), Label::debunk);
  EXPECT_EQ(parse_label("debunking"), Label::debunk);
  EXPECT_EQ(parse_label("DeBuNkInG"), Label::debunk);
}

TEST(Label, RejectsOutsideTheClosedSet) {
  for (const char* bad : {"satire", "", "fake ", "reall", "debunked"}) {
    try {
      parse_label(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::UnknownLabel);
    }
  }
}

TEST(Label, SerializeRoundTrips) {
  for (Label l : kAllLabels) EXPECT_EQ(parse_label(to_string(l)), l);
  EXPECT_EQ(to_string(Label::debunk), "debunk");
}

TEST(Label, CollapseMapsDebunkToReal) {
  EXPECT_EQ(collapse_to_binary(Label::debunk), Label::real);
  EXPECT_EQ(collapse_to_binary(Label::fake), Label::fake);
  EXPECT_EQ(collapse_to_binary(Label::real), Label::real);
}

TEST(Gray, WeightsRoundHalfUp) {
  const std::vector<std::uint8_t> rgb = {255, 255, 255, 0, 0, 0, 255, 0, 0, 0, 255, 0, 0, 0, 255, 1, 1, 1};
  const auto g = rgb_to_gray(rgb);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_EQ(g[0], 255);
  EXPECT_EQ(g[1], 0);
  EXPECT_EQ(g[2], 76);   // 76.245
  EXPECT_EQ(g[3], 150);  // 149.685
  EXPECT_EQ(g[4], 29);   // 29.07
  EXPECT_EQ(g[5], 1);
  EXPECT_EQ(rgb_to_gray(std::vector<std::uint8_t>{0, 0, 0})[0], 0);
  // 2.99 + 0.57 = 3.56
  EXPECT_EQ(rgb_to_gray(std::vector<std::uint8_t>{10, 0, 5})[0], 4);
}

TEST(Validate, WellFormedRecordIsOk) { EXPECT_TRUE(validate_record(good_record()).ok()); }

TEST(Validate, EmptyIdIsReported) {
  auto r = good_record();
  r.video_id.clear();
  const auto v = validate_record(r);
  EXPECT_TRUE(has(v, "video_id empty"));
}

TEST(Validate, DecreasingTimestampsReported) {
  auto r = good_record();
  r.frames.resize(2);
  r.frames[0].timestamp_ms = 5;
  r.frames[1].timestamp_ms = 3;
  EXPECT_TRUE(has(validate_record(r), "timestamps not non-decreasing"));
}

TEST(Validate, CollectsEveryViolation) {
  auto r = good_record();
  r.video_id.clear();
  r.frames[1].pixels.pop_back();
  r.metadata.like_count = -1;
  r.metadata.comment_count = -2;
  const auto v = validate_record(r);
  EXPECT_TRUE(has(v, "video_id empty"));
  EXPECT_TRUE(has(v, "pixel count"));
  EXPECT_TRUE(has(v, "like_count"));
  EXPECT_TRUE(has(v, "comment_count"));
  EXPECT_GE(v.violations.size(), 4u);
}

TEST(Validate, AudioOutOfRange) {
  auto r = good_record();
  r.audio = AudioSignal{{0.0, 1.5}, 16000};
  EXPECT_TRUE(has(validate_record(r), "audio"));
}

TEST(Validate, IsIdempotentAndPure) {
  auto r = good_record();
  r.video_id.clear();
  const auto copy = r;
  const auto a = validate_record(r);
  const auto b = validate_record(r);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_EQ(r.video_id, copy.video_id);
  EXPECT_EQ(r.frames.size(), copy.frames.size());
}

TEST(Validate, CorpusFlagsDuplicates) {
  std::vector<VideoRecord> rs = {good_record(), good_record()};
  const auto v = validate_corpus(rs);
  EXPECT_TRUE(has(v, "duplicate"));
}

TEST(Duration, InferredFromFrames) {
  auto r = good_record();  // 0, 1000, 2000 ms
  EXPECT_DOUBLE_EQ(inferred_duration_s(r), 3.0);
  r.duration_s = 7.5;
  EXPECT_DOUBLE_EQ(inferred_duration_s(r), 7.5);
}

TEST(Text, CollapseWhitespace) {
  EXPECT_EQ(collapse_whitespace("  a \t b\n\nc  "), "a b c");
  EXPECT_EQ(collapse_whitespace(" \n "), "");
}

TEST(Text, Utf8PrefixNeverSplitsACodePoint) {
  const std::string s = "a\xC3\xA9\xE2\x82\xAC\xF0\x9F\x98\x80z";  // a é € 😀 z
  EXPECT_EQ(utf8_length(s), 5u);
  for (std::size_t n = 0; n <= 6; ++n) {
    const auto p = utf8_prefix(s, n);
    EXPECT_EQ(utf8_length(p), std::min<std::size_t>(n, 5));
    EXPECT_EQ(s.compare(0, p.size(), p), 0);
  }
}

TEST(Errors, CodeAndMessage) {
  const Error e(Errc::EmptyRange, "x");
  EXPECT_EQ(e.code(), Errc::EmptyRange);
  EXPECT_NE(std::string(e.what()).find("EmptyRange"), std::string::npos);
}

}  // namespace
}  // namespace vidcheck
