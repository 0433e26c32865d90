// Copyright 2026 The falsealarm Authors.
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

#include "fa/metrics.hpp"

#include <algorithm>

#include "fa/errors.hpp"

namespace fa::metrics {

WerBreakdown Align(const TokenSequence& reference, const TokenSequence& hypothesis) {
  if (reference.empty())
    throw UndefinedRatioError("WER is undefined for an empty reference");
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  const std::size_t cols = m + 1;

  // cost[i * cols + j]: distance between reference[0, i) and hypothesis[0, j).
  std::vector<std::int64_t> cost((n + 1) * cols);
  for (std::size_t i = 0; i <= n; ++i) cost[i * cols] = static_cast<std::int64_t>(i);
  for (std::size_t j = 0; j <= m; ++j) cost[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int64_t diag =
          cost[(i - 1) * cols + j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      const std::int64_t del = cost[(i - 1) * cols + j] + 1;
      const std::int64_t ins = cost[i * cols + j - 1] + 1;
      cost[i * cols + j] = std::min({diag, del, ins});
    }
  }

  WerBreakdown b;
  b.reference_length = static_cast<std::int64_t>(n);
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::int64_t here = cost[i * cols + j];
    if (i > 0 && j > 0) {
      const bool same = reference[i - 1] == hypothesis[j - 1];
      if (cost[(i - 1) * cols + j - 1] + (same ? 0 : 1) == here) {
        if (!same) ++b.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && cost[(i - 1) * cols + j] + 1 == here) {
      ++b.deletions;
      --i;
      continue;
    }
    ++b.insertions;
    --j;
  }
  return b;
}

WerRatio WerFraction(const WerBreakdown& b) {
  if (b.reference_length <= 0)
    throw UndefinedRatioError("WER is undefined for a zero-length reference");
  return {b.errors(), b.reference_length};
}

double Wer(const WerBreakdown& b) { return WerFraction(b).value(); }

WerBreakdown& operator+=(WerBreakdown& lhs, const WerBreakdown& rhs) {
  lhs.insertions += rhs.insertions;
  lhs.deletions += rhs.deletions;
  lhs.substitutions += rhs.substitutions;
  lhs.reference_length += rhs.reference_length;
  return lhs;
}

bool IsCorrect(const TokenSequence& reference, const TokenSequence& hypothesis) {
  return reference == hypothesis;
}

void ConfusionCounts::Add(bool predicted, bool actual) {
  if (predicted && actual) {
    ++true_positives;
  } else if (predicted) {
    ++false_positives;
  } else if (actual) {
    ++false_negatives;
  } else {
    ++true_negatives;
  }
}

namespace {
double SafeRatio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}
}  // namespace

EvalMetrics ClassificationMetrics(const ConfusionCounts& c) {
  if (c.total() <= 0) throw UndefinedRatioError("cannot compute metrics over an empty evaluation");
  EvalMetrics m;
  m.precision = SafeRatio(c.true_positives, c.true_positives + c.false_positives);
  m.recall = SafeRatio(c.true_positives, c.true_positives + c.false_negatives);
  m.accuracy = SafeRatio(c.true_positives + c.true_negatives, c.total());
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace fa::metrics
