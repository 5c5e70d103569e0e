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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vidcheck/error.hpp"
#include "vidcheck/textline/textline.hpp"

namespace vidcheck::textline {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

}  // namespace

std::vector<int> collapse_alignment(std::span<const int> path, int blank_index) {
  std::vector<int> out;
  int prev = blank_index;
  bool have_prev = false;
  for (int symbol : path) {
    if ((!have_prev || symbol != prev) && symbol != blank_index) out.push_back(symbol);
    prev = symbol;
    have_prev = true;
  }
  return out;
}

void validate(const CtcInstance& instance) {
  const auto fail = [](const std::string& what) {
    throw Error(Errc::InvalidInstance, what);
  };
  if (instance.steps == 0) fail("zero time steps");
  if (instance.vocab == 0) fail("empty vocabulary");
  if (instance.log_probs.size() != instance.steps * instance.vocab) {
    fail("log_probs size != steps * vocab");
  }
  if (instance.blank_index < 0 ||
      static_cast<std::size_t>(instance.blank_index) >= instance.vocab) {
    fail("blank index outside vocabulary");
  }
  for (int symbol : instance.target) {
    if (symbol < 0 || static_cast<std::size_t>(symbol) >= instance.vocab) {
      fail("target symbol " + std::to_string(symbol) + " outside vocabulary");
    }
    if (symbol == instance.blank_index) fail("target contains the blank symbol");
  }
  for (std::size_t t = 0; t < instance.steps; ++t) {
    double mass = 0.0;
    for (std::size_t v = 0; v < instance.vocab; ++v) {
      mass += std::exp(instance.log_probs[t * instance.vocab + v]);
    }
    if (std::abs(mass - 1.0) > 1e-9) {
      fail("row " + std::to_string(t) + " sums to " + std::to_string(mass));
    }
  }
}

std::size_t required_steps(std::span<const int> target) {
  std::size_t needed = target.size();
  for (std::size_t i = 1; i < target.size(); ++i) {
    if (target[i] == target[i - 1]) ++needed;
  }
  return needed;
}

double ctc_loss(const CtcInstance& instance) {
  validate(instance);
  const auto& target = instance.target;
  if (required_steps(target) > instance.steps) {
    return std::numeric_limits<double>::infinity();
  }

  // Extended sequence: blank, y1, blank, y2, ..., yL, blank.
  const std::size_t ext_len = 2 * target.size() + 1;
  const auto ext = [&](std::size_t s) {
    return s % 2 == 0 ? instance.blank_index : target[s / 2];
  };

  std::vector<double> alpha(ext_len, kNegInf);
  std::vector<double> next(ext_len, kNegInf);
  alpha[0] = instance.log_prob(0, instance.blank_index);
  if (ext_len > 1) alpha[1] = instance.log_prob(0, ext(1));

  for (std::size_t t = 1; t < instance.steps; ++t) {
    for (std::size_t s = 0; s < ext_len; ++s) {
      double acc = alpha[s];
      if (s >= 1) acc = LogAdd(acc, alpha[s - 1]);
      if (s >= 2 && ext(s) != instance.blank_index && ext(s) != ext(s - 2)) {
        acc = LogAdd(acc, alpha[s - 2]);
      }
      next[s] = acc == kNegInf ? kNegInf : acc + instance.log_prob(t, ext(s));
    }
    std::swap(alpha, next);
  }

  double log_likelihood = alpha[ext_len - 1];
  if (ext_len > 1) log_likelihood = LogAdd(log_likelihood, alpha[ext_len - 2]);
  if (log_likelihood == kNegInf) return std::numeric_limits<double>::infinity();
  // Rounding can push a certain alignment a hair above probability one.
  return std::max(0.0, -log_likelihood);
}

}  // namespace vidcheck::textline
