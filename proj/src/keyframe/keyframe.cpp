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

#include "vidcheck/keyframe/keyframe.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vidcheck/error.hpp"
#include "vidcheck/simd/kernels.hpp"

namespace vidcheck::keyframe {
namespace {

void RequireSameShape(const Frame& a, const Frame& b) {
  if (a.width != b.width || a.height != b.height ||
      a.pixels.size() != b.pixels.size()) {
    throw Error(Errc::DimensionMismatch,
                std::to_string(a.width) + "x" + std::to_string(a.height) + " vs " +
                    std::to_string(b.width) + "x" + std::to_string(b.height));
  }
}

double CosineFromStats(double ab, double aa, double bb) {
  if (aa == 0.0 && bb == 0.0) return 1.0;
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return std::clamp(ab / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

}  // namespace

SegmentPlan plan_segments(double total_duration_s, double segment_duration_s) {
  if (!(total_duration_s > 0.0) || !(segment_duration_s > 0.0)) {
    throw Error(Errc::NonPositiveDuration,
                "total=" + std::to_string(total_duration_s) +
                    " segment=" + std::to_string(segment_duration_s));
  }
  // Shave a relative ulp-scale amount off the quotient so 0.9 / 0.3 does not
  // spawn an empty trailing segment.
  const double quotient = total_duration_s / segment_duration_s;
  const auto count = static_cast<std::size_t>(
      std::max(1.0, std::ceil(quotient * (1.0 - 1e-12))));

  SegmentPlan plan;
  plan.total_duration_s = total_duration_s;
  plan.segment_duration_s = segment_duration_s;
  plan.segment_count = count;
  plan.boundaries.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double start = static_cast<double>(k) * segment_duration_s;
    const double end = k + 1 == count
                           ? total_duration_s
                           : std::min(static_cast<double>(k + 1) * segment_duration_s,
                                      total_duration_s);
    plan.boundaries.push_back({start, end});
  }
  return plan;
}

FrameSelection select_uniform_frames(std::int64_t start_frame,
                                     std::int64_t end_frame_exclusive,
                                     std::size_t count) {
  if (end_frame_exclusive <= start_frame) {
    throw Error(Errc::EmptyRange, "[" + std::to_string(start_frame) + ", " +
                                      std::to_string(end_frame_exclusive) + ")");
  }
  if (count == 0) throw Error(Errc::EmptyRange, "zero frames requested");

  FrameSelection sel;
  sel.start_frame = start_frame;
  sel.end_frame_exclusive = end_frame_exclusive;
  sel.requested = count;

  // Evenly spaced reals start + i * (stop - start) / (count - 1), truncated
  // toward zero. Exact rational arithmetic keeps values that land on an
  // integer from rounding below it.
  const std::int64_t span = end_frame_exclusive - 1 - start_frame;
  const auto den = static_cast<__int128>(count > 1 ? count - 1 : 1);
  sel.frame_ids.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const __int128 num = static_cast<__int128>(start_frame) * den +
                         static_cast<__int128>(i) * static_cast<__int128>(span);
    const auto id = static_cast<std::int64_t>(num / den);
    if (sel.frame_ids.empty() || sel.frame_ids.back() != id) sel.frame_ids.push_back(id);
  }
  return sel;
}

double frame_difference_score(const Frame& a, const Frame& b) {
  RequireSameShape(a, b);
  if (a.pixels.empty()) return 0.0;
  const std::uint64_t sad = simd::sum_abs_diff(a.view(), b.view());
  return static_cast<double>(sad) / (255.0 * static_cast<double>(a.pixels.size()));
}

double cosine_similarity(const Frame& a, const Frame& b) {
  RequireSameShape(a, b);
  const simd::DotStats s = simd::dot_stats(a.view(), b.view());
  return CosineFromStats(static_cast<double>(s.ab), static_cast<double>(s.aa),
                         static_cast<double>(s.bb));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::DimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  return CosineFromStats(simd::dot(a, b), simd::dot(a, a), simd::dot(b, b));
}

std::vector<std::size_t> filter_similar_frames(std::span<const Frame> frames,
                                               const FrameFilterConfig& config) {
  if (frames.empty()) throw Error(Errc::EmptyInput, "no frames to filter");
  if (!(config.filter_threshold >= 0.0 && config.filter_threshold <= 1.0)) {
    throw Error(Errc::InvalidConfig, "filter_threshold outside [0, 1]");
  }
  std::vector<std::size_t> kept{0};
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const std::size_t ref =
        config.comparison_mode == ComparisonMode::immediate_predecessor ? i - 1
                                                                        : kept.back();
    if (!(cosine_similarity(frames[i], frames[ref]) > config.filter_threshold)) {
      kept.push_back(i);
    }
  }
  return kept;
}

std::vector<std::size_t> keyframes_by_difference(std::span<const Frame> frames,
                                                 double diff_threshold) {
  if (frames.empty()) throw Error(Errc::EmptyInput, "no frames to score");
  std::vector<std::size_t> keys{0};
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frame_difference_score(frames[i - 1], frames[i]) > diff_threshold) keys.push_back(i);
  }
  return keys;
}

std::vector<std::size_t> keyframes_by_motion(std::span<const double> magnitudes,
                                             double motion_threshold) {
  if (magnitudes.empty()) throw Error(Errc::EmptyInput, "no motion magnitudes");
  std::vector<std::size_t> keys{0};
  for (std::size_t i = 1; i < magnitudes.size(); ++i) {
    if (magnitudes[i] > motion_threshold) keys.push_back(i);
  }
  return keys;
}

std::vector<std::size_t> match_frames_to_timestamps(
    std::span<const Frame> frames, std::span<const std::int64_t> target_ms) {
  if (frames.empty()) throw Error(Errc::EmptyInput, "no frames to match");
  std::vector<std::size_t> out;
  std::vector<bool> seen(frames.size(), false);
  for (const std::int64_t target : target_ms) {
    const auto it = std::lower_bound(
        frames.begin(), frames.end(), target,
        [](const Frame& f, std::int64_t t) { return f.timestamp_ms < t; });
    auto pos = static_cast<std::size_t>(it - frames.begin());
    if (pos == frames.size()) {
      pos = frames.size() - 1;
    } else if (pos > 0) {
      const std::int64_t after = frames[pos].timestamp_ms - target;
      const std::int64_t before = target - frames[pos - 1].timestamp_ms;
      if (before <= after) --pos;
    }
    if (!seen[pos]) {
      seen[pos] = true;
      out.push_back(pos);
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> frames_in_segment(
    std::span<const Frame> frames, const Segment& segment, bool is_last) {
  const auto seconds = [](const Frame& f) {
    return static_cast<double>(f.timestamp_ms) / 1000.0;
  };
  const auto first = std::partition_point(
      frames.begin(), frames.end(),
      [&](const Frame& f) { return seconds(f) < segment.start_s; });
  const auto last = is_last ? frames.end()
                            : std::partition_point(first, frames.end(), [&](const Frame& f) {
                                return seconds(f) < segment.end_s;
                              });
  return {static_cast<std::size_t>(first - frames.begin()),
          static_cast<std::size_t>(last - frames.begin())};
}

}  // namespace vidcheck::keyframe
