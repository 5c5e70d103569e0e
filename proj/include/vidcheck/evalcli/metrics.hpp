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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vidcheck/core/types.hpp"

namespace vidcheck::evalcli {

// counts[gold][predicted]
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kLabelCount>, kLabelCount> counts{};

  void add(Label gold, Label predicted) {
    ++counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(predicted)];
  }
  std::uint64_t total() const noexcept;
  std::uint64_t correct() const noexcept;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;  // gold count
};

struct Averages {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  std::vector<Label> classes;  // averaging space, {real, fake} when binary
  ConfusionMatrix confusion;
  std::array<ClassMetrics, kLabelCount> per_class{};
  double accuracy = 0.0;
  Averages macro;     // unweighted mean over `classes`
  Averages weighted;  // support-weighted mean over `classes`
  Averages micro;
  std::size_t n_scored = 0;
  std::size_t n_failed = 0;
  std::vector<std::string> failed_ids;  // in corpus order
};

using LabelPair = std::pair<Label, Label>;  // (gold, predicted)

// Precision/recall are 0 when their denominator is 0; F1 is 0 when P+R = 0.
// binary collapses debunk onto real before counting. Throws EmptyInput.
MetricsReport compute_metrics(std::span<const LabelPair> pairs, bool binary = false);

enum class ReportFormat { json, markdown };

std::string render_report(const MetricsReport& report, ReportFormat format);

}  // namespace vidcheck::evalcli
