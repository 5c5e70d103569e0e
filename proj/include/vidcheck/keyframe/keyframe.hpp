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

// Segment planning, uniform frame picking, frame-difference keyframing and
// cosine-similarity deduplication.
//
// Selection functions return positions into the input frame span rather than
// copies; callers index back into their own storage.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vidcheck/core/types.hpp"

namespace vidcheck::keyframe {

struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;

  double length_s() const noexcept { return end_s - start_s; }
};

struct SegmentPlan {
  double total_duration_s = 0.0;
  double segment_duration_s = 0.0;
  std::size_t segment_count = 0;
  std::vector<Segment> boundaries;
};

// ceil(total / segment) segments; the last one may be shorter.
// Throws NonPositiveDuration.
SegmentPlan plan_segments(double total_duration_s, double segment_duration_s);

struct FrameSelection {
  std::int64_t start_frame = 0;
  std::int64_t end_frame_exclusive = 0;
  std::size_t requested = 0;
  std::vector<std::int64_t> frame_ids;
};

// Evenly spaced reals from start to end_exclusive - 1 (both endpoints when
// count >= 2), truncated to integers, duplicates dropped. Throws EmptyRange.
FrameSelection select_uniform_frames(std::int64_t start_frame,
                                     std::int64_t end_frame_exclusive,
                                     std::size_t count);

// Mean absolute pixel difference scaled to [0, 1]. Throws DimensionMismatch.
double frame_difference_score(const Frame& a, const Frame& b);

// Cosine similarity of the flattened pixel vectors. Two all-zero frames are
// similar (1); exactly one all-zero frame gives 0. Throws DimensionMismatch.
double cosine_similarity(const Frame& a, const Frame& b);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

enum class ComparisonMode { immediate_predecessor, last_retained };

struct FrameFilterConfig {
  double filter_threshold = 0.85;
  ComparisonMode comparison_mode = ComparisonMode::immediate_predecessor;
};

// Positions of retained frames. The first frame is always kept; a later frame
// is dropped iff its similarity to the reference exceeds the threshold.
// Throws EmptyInput, InvalidConfig (threshold outside [0, 1]).
std::vector<std::size_t> filter_similar_frames(std::span<const Frame> frames,
                                               const FrameFilterConfig& config);

// Tunable; not derived from any measurement.
inline constexpr double kDefaultDiffThreshold = 0.30;

// Frame 0 plus every frame whose difference to its predecessor exceeds the
// threshold. Throws EmptyInput.
std::vector<std::size_t> keyframes_by_difference(std::span<const Frame> frames,
                                                 double diff_threshold = kDefaultDiffThreshold);

// Same rule as keyframes_by_difference, driven by externally computed
// per-frame motion magnitudes (entry i is the motion into frame i; entry 0 is
// ignored). Throws EmptyInput.
std::vector<std::size_t> keyframes_by_motion(std::span<const double> magnitudes,
                                             double motion_threshold);

// Nearest frame by timestamp for each target, ties to the earlier frame,
// first occurrence kept. Throws EmptyInput.
std::vector<std::size_t> match_frames_to_timestamps(
    std::span<const Frame> frames, std::span<const std::int64_t> target_ms);

// Half-open position range [first, last) of frames whose timestamps fall in
// the segment. The final segment is closed on the right.
std::pair<std::size_t, std::size_t> frames_in_segment(
    std::span<const Frame> frames, const Segment& segment, bool is_last);

}  // namespace vidcheck::keyframe
