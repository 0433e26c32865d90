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

// False-alarm estimator: vocabulary, labeling, padded encoding, dataset
// split, Adam training of the LSTM classifier, evaluation, and model files.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "fa/estimator/lstm.hpp"
#include "fa/metrics.hpp"
#include "fa/textnorm.hpp"
#include "json.hpp"

namespace fa::estimator {

/// Frequency-ranked word index. Ids start at 1 (0 is padding); the most
/// frequent word gets 1, ties go to the word seen first. Unknown words map
/// to oov_id() == size() + 1.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary Build(const std::vector<textnorm::TokenSequence>& corpus);
  /// Words listed in id order (words[0] has id 1).
  static Vocabulary FromWords(std::vector<std::string> words);

  int size() const { return static_cast<int>(words_.size()); }
  int oov_id() const { return size() + 1; }
  int IdOf(const std::string& word) const;
  const std::vector<std::string>& words() const { return words_; }

  /// Ids in order, truncated to `max_len`, zero-padded at the end.
  std::vector<int> Encode(const textnorm::TokenSequence& text, int max_len) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

struct EncodedExample {
  std::vector<int> ids;
  int label = 0;
  std::string text_id;
};

struct LabeledText {
  std::string text_id;
  int fa_count = 0;
  int combos = 0;
  int label = 0;
};

/// Threshold is combos / 2 (integer division); label 1 iff count exceeds
/// it. Throws LabelingError when a count is negative or above `combos`.
std::vector<LabeledText> LabelTexts(const std::map<std::string, int>& fa_counts, int combos);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};

/// test = floor(0.3 n), validation = floor(0.1 n), train = the rest.
SplitSizes SplitSizesFor(std::size_t n);

struct DatasetSplit {
  std::vector<EncodedExample> train;
  std::vector<EncodedExample> validation;
  std::vector<EncodedExample> test;
};

/// Seeded shuffle, then test, validation, and train are carved off in that
/// order.
DatasetSplit SplitDataset(std::vector<EncodedExample> examples, std::uint64_t seed);

struct TrainConfig {
  int epochs = 20;
  int batch_size = 32;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 42;
  int embedding_dim = 64;
  int hidden_dim = 64;

  void Validate() const;
};

struct TrainHistory {
  std::vector<double> train_loss;       // mean loss over the epoch's batches
  std::vector<double> validation_loss;  // after the epoch
};

using Model = LstmClassifier<double>;

/// Packs examples (all of equal length) into a token batch and label vector.
TokenBatch PackTokens(const std::vector<EncodedExample>& examples, std::span<const std::size_t> order);
VectorX<double> PackLabels(const std::vector<EncodedExample>& examples, std::span<const std::size_t> order);

/// Mean binary cross-entropy over a whole set.
double MeanLoss(const Model& model, const std::vector<EncodedExample>& examples, int batch_size = 256);

/// Adam on the flattened parameter vector.
class AdamOptimizer {
 public:
  AdamOptimizer(Eigen::Index size, const TrainConfig& config);
  void Step(VectorX<double>& params, const VectorX<double>& grad);
  std::int64_t steps() const { return steps_; }

 private:
  double learning_rate_, beta1_, beta2_, epsilon_;
  VectorX<double> first_moment_;
  VectorX<double> second_moment_;
  std::int64_t steps_ = 0;
};

/// Mini-batch Adam over `train` for config.epochs epochs; the order of each
/// epoch is reshuffled from the config seed. Throws DivergenceError on a
/// non-finite loss and ConfigError on empty sets.
TrainHistory Train(Model& model, const std::vector<EncodedExample>& train,
                   const std::vector<EncodedExample>& validation, const TrainConfig& config);

struct Evaluation {
  metrics::ConfusionCounts counts;
  metrics::EvalMetrics metrics;
};

/// Positive iff probability > threshold.
Evaluation Evaluate(const Model& model, const std::vector<EncodedExample>& test, double threshold = 0.5);

/// Model plus the vocabulary and sequence length it was trained with.
struct Estimator {
  Vocabulary vocabulary;
  Model model;
  int max_len = 1;

  struct Prediction {
    double probability = 0.5;
    bool flagged = false;
  };

  /// normalize -> encode -> forward. Throws CompatibilityError when the
  /// vocabulary and model disagree.
  Prediction Predict(std::string_view raw_text,
                     const textnorm::AbbreviationTable& table = textnorm::AbbreviationTable::Defaults()) const;

  void CheckCompatible() const;

  nlohmann::json ToJson() const;
  static Estimator FromJson(const nlohmann::json& j);
  void Save(const std::filesystem::path& path) const;
  static Estimator Load(const std::filesystem::path& path);
};

constexpr int kModelFormatVersion = 1;

}  // namespace fa::estimator
