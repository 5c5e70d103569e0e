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

#include "vidcheck/evalcli/metrics.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "vidcheck/error.hpp"

namespace vidcheck::evalcli {

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& row : counts) {
    for (auto c : row) n += c;
  }
  return n;
}

std::uint64_t ConfusionMatrix::correct() const noexcept {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < kLabelCount; ++i) n += counts[i][i];
  return n;
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

MetricsReport compute_metrics(std::span<const LabelPair> pairs, bool binary) {
  if (pairs.empty()) throw Error(Errc::EmptyInput, "no scored records");
  MetricsReport rep;
  rep.classes = binary ? std::vector<Label>{Label::real, Label::fake}
                       : std::vector<Label>(kAllLabels.begin(), kAllLabels.end());
  for (auto [gold, pred] : pairs) {
    if (binary) {
      gold = collapse_to_binary(gold);
      pred = collapse_to_binary(pred);
    }
    rep.confusion.add(gold, pred);
  }
  const auto& m = rep.confusion.counts;
  const std::uint64_t total = rep.confusion.total();
  rep.n_scored = static_cast<std::size_t>(total);
  rep.accuracy = ratio(rep.confusion.correct(), total);

  std::uint64_t tp_sum = 0, fp_sum = 0, fn_sum = 0;
  for (Label c : rep.classes) {
    const auto k = static_cast<std::size_t>(c);
    std::uint64_t tp = m[k][k], fp = 0, fn = 0;
    for (std::size_t o = 0; o < kLabelCount; ++o) {
      if (o == k) continue;
      fp += m[o][k];
      fn += m[k][o];
    }
    ClassMetrics& cm = rep.per_class[k];
    cm.precision = ratio(tp, tp + fp);
    cm.recall = ratio(tp, tp + fn);
    cm.f1 = harmonic(cm.precision, cm.recall);
    cm.support = tp + fn;
    tp_sum += tp;
    fp_sum += fp;
    fn_sum += fn;

    const double n = static_cast<double>(rep.classes.size());
    rep.macro.precision += cm.precision / n;
    rep.macro.recall += cm.recall / n;
    rep.macro.f1 += cm.f1 / n;
    const double w = ratio(cm.support, total);
    rep.weighted.precision += w * cm.precision;
    rep.weighted.recall += w * cm.recall;
    rep.weighted.f1 += w * cm.f1;
  }
  rep.micro.precision = ratio(tp_sum, tp_sum + fp_sum);
  rep.micro.recall = ratio(tp_sum, tp_sum + fn_sum);
  rep.micro.f1 = harmonic(rep.micro.precision, rep.micro.recall);
  return rep;
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
  return buf;
}

nlohmann::json averages_json(const Averages& a) {
  return {{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}};
}

}  // namespace

std::string render_report(const MetricsReport& r, ReportFormat format) {
  if (format == ReportFormat::json) {
    nlohmann::json per_class = nlohmann::json::object();
    nlohmann::json labels = nlohmann::json::array();
    for (Label c : r.classes) {
      const auto& cm = r.per_class[static_cast<std::size_t>(c)];
      labels.push_back(to_string(c));
      per_class[std::string(to_string(c))] = {{"precision", cm.precision},
                                               {"recall", cm.recall},
                                               {"f1", cm.f1},
                                               {"support", cm.support}};
    }
    nlohmann::json confusion = nlohmann::json::array();
    for (Label g : r.classes) {
      nlohmann::json row = nlohmann::json::array();
      for (Label p : r.classes) {
        row.push_back(r.confusion.counts[static_cast<std::size_t>(g)][static_cast<std::size_t>(p)]);
      }
      confusion.push_back(std::move(row));
    }
    const nlohmann::json j{{"v", 1},
                           {"labels", std::move(labels)},
                           {"accuracy", r.accuracy},
                           {"macro_precision", r.macro.precision},
                           {"macro_recall", r.macro.recall},
                           {"macro_f1", r.macro.f1},
                           {"weighted", averages_json(r.weighted)},
                           {"micro", averages_json(r.micro)},
                           {"per_class", std::move(per_class)},
                           {"confusion", std::move(confusion)},
                           {"n_scored", r.n_scored},
                           {"n_failed", r.n_failed},
                           {"failed_ids", r.failed_ids},
                           {"zero_denominator_rule", "precision, recall and F1 are 0 when undefined"}};
    return j.dump(2) + "\n";
  }

  std::ostringstream md;
  md << "| Averaging | Accuracy | F1 | Precision | Recall |\n";
  md << "|---|---|---|---|---|\n";
  md << "| macro | " << pct(r.accuracy) << " | " << pct(r.macro.f1) << " | "
     << pct(r.macro.precision) << " | " << pct(r.macro.recall) << " |\n";
  md << "| weighted | " << pct(r.accuracy) << " | " << pct(r.weighted.f1) << " | "
     << pct(r.weighted.precision) << " | " << pct(r.weighted.recall) << " |\n";
  md << "\n| Class | F1 | Precision | Recall | Support |\n";
  md << "|---|---|---|---|---|\n";
  for (Label c : r.classes) {
    const auto& cm = r.per_class[static_cast<std::size_t>(c)];
    md << "| " << to_string(c) << " | " << pct(cm.f1) << " | " << pct(cm.precision) << " | "
       << pct(cm.recall) << " | " << cm.support << " |\n";
  }
  md << "\nScored: " << r.n_scored << ". Failed (excluded from the matrix): " << r.n_failed
     << ".\n";
  md << "Headline F1 is macro, the unweighted mean over classes. Precision or recall with a zero "
        "denominator counts as 0, and F1 is 0 when precision + recall = 0.\n";
  return md.str();
}

}  // namespace vidcheck::evalcli
