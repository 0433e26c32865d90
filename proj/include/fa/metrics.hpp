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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fa/textnorm.hpp"

namespace fa::metrics {

using textnorm::TokenSequence;

/// Edit counts along one optimal word alignment.
struct WerBreakdown {
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
  std::int64_t substitutions = 0;
  std::int64_t reference_length = 0;

  std::int64_t errors() const { return insertions + deletions + substitutions; }
  bool operator==(const WerBreakdown&) const = default;
};

/// Exact WER as errors / reference words.
struct WerRatio {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
  bool operator==(const WerRatio&) const = default;
};

/// Minimal unit-cost word alignment. Among optimal paths the backtrace
/// prefers the diagonal (match/substitution), then deletion, then insertion.
/// Throws UndefinedRatioError when `reference` is empty.
WerBreakdown Align(const TokenSequence& reference, const TokenSequence& hypothesis);

/// (I + D + S) / N; may exceed 1. Throws UndefinedRatioError when N == 0.
double Wer(const WerBreakdown& b);
WerRatio WerFraction(const WerBreakdown& b);

/// Sums breakdowns so WER can be pooled over a corpus.
WerBreakdown& operator+=(WerBreakdown& lhs, const WerBreakdown& rhs);

bool IsCorrect(const TokenSequence& reference, const TokenSequence& hypothesis);

struct ConfusionCounts {
  std::int64_t true_positives = 0;
  std::int64_t false_positives = 0;
  std::int64_t false_negatives = 0;
  std::int64_t true_negatives = 0;

  std::int64_t total() const {
    return true_positives + false_positives + false_negatives + true_negatives;
  }
  void Add(bool predicted, bool actual);
};

struct EvalMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  double f1 = 0.0;
};

/// Precision, recall, accuracy and F1, with 0/0 defined as 0.
/// Throws UndefinedRatioError on all-zero counts.
EvalMetrics ClassificationMetrics(const ConfusionCounts& c);

}  // namespace fa::metrics
