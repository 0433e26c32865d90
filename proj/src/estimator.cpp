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

#include "fa/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fa/errors.hpp"
#include "fa/random.hpp"

namespace fa::estimator {
using nlohmann::json;

Vocabulary Vocabulary::Build(const std::vector<textnorm::TokenSequence>& corpus) {
  struct Stat {
    std::int64_t count = 0;
    std::size_t first_seen = 0;
  };
  std::unordered_map<std::string, Stat> stats;
  std::vector<std::string> order;
  for (const auto& text : corpus) {
    for (const auto& w : text) {
      auto [it, inserted] = stats.try_emplace(w);
      if (inserted) {
        it->second.first_seen = order.size();
        order.push_back(w);
      }
      ++it->second.count;
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    return stats[a].count > stats[b].count;
  });
  return FromWords(std::move(order));
}

Vocabulary Vocabulary::FromWords(std::vector<std::string> words) {
  Vocabulary v;
  v.words_ = std::move(words);
  for (std::size_t i = 0; i < v.words_.size(); ++i) {
    if (!v.ids_.emplace(v.words_[i], static_cast<int>(i) + 1).second)
      throw CompatibilityError("duplicate vocabulary word '" + v.words_[i] + "'");
  }
  return v;
}

int Vocabulary::IdOf(const std::string& word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? oov_id() : it->second;
}

std::vector<int> Vocabulary::Encode(const textnorm::TokenSequence& text, int max_len) const {
  if (max_len < 1) throw EncodingError("max_len must be at least 1");
  std::vector<int> ids(static_cast<std::size_t>(max_len), 0);
  const std::size_t n = std::min(text.size(), ids.size());
  for (std::size_t i = 0; i < n; ++i) ids[i] = IdOf(text[i]);
  return ids;
}

std::vector<LabeledText> LabelTexts(const std::map<std::string, int>& fa_counts, int combos) {
  if (combos < 1) throw LabelingError("number of (TTS, ASR) combinations must be positive");
  const int threshold = combos / 2;
  std::vector<LabeledText> out;
  out.reserve(fa_counts.size());
  for (const auto& [id, count] : fa_counts) {
    if (count < 0 || count > combos)
      throw LabelingError("text '" + id + "' has " + std::to_string(count) + " false alarms out of " +
                          std::to_string(combos) + " combinations");
    out.push_back({id, count, combos, count > threshold ? 1 : 0});
  }
  return out;
}

SplitSizes SplitSizesFor(std::size_t n) {
  SplitSizes s;
  s.test = n * 3 / 10;
  s.validation = n / 10;
  s.train = n - s.test - s.validation;
  return s;
}

DatasetSplit SplitDataset(std::vector<EncodedExample> examples, std::uint64_t seed) {
  if (examples.empty()) throw ConfigError("cannot split an empty dataset");
  Rng rng(seed);
  Shuffle(std::span<EncodedExample>(examples), rng);
  const SplitSizes sizes = SplitSizesFor(examples.size());
  DatasetSplit split;
  auto take = [&](std::vector<EncodedExample>& dst, std::size_t begin, std::size_t count) {
    dst.assign(std::make_move_iterator(examples.begin() + static_cast<std::ptrdiff_t>(begin)),
               std::make_move_iterator(examples.begin() + static_cast<std::ptrdiff_t>(begin + count)));
  };
  take(split.test, 0, sizes.test);
  take(split.validation, sizes.test, sizes.validation);
  take(split.train, sizes.test + sizes.validation, sizes.train);
  return split;
}

void TrainConfig::Validate() const {
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (embedding_dim < 1 || hidden_dim < 1) throw ConfigError("embedding and hidden sizes must be positive");
}

TokenBatch PackTokens(const std::vector<EncodedExample>& examples, std::span<const std::size_t> order) {
  if (order.empty()) return TokenBatch(0, 0);
  const auto len = static_cast<Eigen::Index>(examples[order.front()].ids.size());
  TokenBatch batch(len, static_cast<Eigen::Index>(order.size()));
  for (std::size_t b = 0; b < order.size(); ++b) {
    const auto& ids = examples[order[b]].ids;
    if (static_cast<Eigen::Index>(ids.size()) != len) throw EncodingError("examples in a batch differ in length");
    for (Eigen::Index t = 0; t < len; ++t) batch(t, static_cast<Eigen::Index>(b)) = ids[static_cast<std::size_t>(t)];
  }
  return batch;
}

VectorX<double> PackLabels(const std::vector<EncodedExample>& examples, std::span<const std::size_t> order) {
  VectorX<double> labels(static_cast<Eigen::Index>(order.size()));
  for (std::size_t b = 0; b < order.size(); ++b) labels(static_cast<Eigen::Index>(b)) = examples[order[b]].label;
  return labels;
}

double MeanLoss(const Model& model, const std::vector<EncodedExample>& examples, int batch_size) {
  if (examples.empty()) throw ConfigError("cannot compute the loss of an empty set");
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double total = 0.0;
  for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(batch_size)) {
    const std::size_t count = std::min(order.size() - start, static_cast<std::size_t>(batch_size));
    const std::span<const std::size_t> chunk(order.data() + start, count);
    total += model.Loss(PackTokens(examples, chunk), PackLabels(examples, chunk)) * static_cast<double>(count);
  }
  return total / static_cast<double>(examples.size());
}

AdamOptimizer::AdamOptimizer(Eigen::Index size, const TrainConfig& config)
    : learning_rate_(config.learning_rate),
      beta1_(config.beta1),
      beta2_(config.beta2),
      epsilon_(config.epsilon),
      first_moment_(VectorX<double>::Zero(size)),
      second_moment_(VectorX<double>::Zero(size)) {}

void AdamOptimizer::Step(VectorX<double>& params, const VectorX<double>& grad) {
  ++steps_;
  first_moment_ = beta1_ * first_moment_ + (1.0 - beta1_) * grad;
  second_moment_ = beta2_ * second_moment_ + (1.0 - beta2_) * grad.cwiseAbs2();
  const double correction1 = 1.0 - std::pow(beta1_, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(beta2_, static_cast<double>(steps_));
  params.array() -= learning_rate_ * (first_moment_.array() / correction1) /
                    ((second_moment_.array() / correction2).sqrt() + epsilon_);
}

TrainHistory Train(Model& model, const std::vector<EncodedExample>& train,
                   const std::vector<EncodedExample>& validation, const TrainConfig& config) {
  config.Validate();
  if (train.empty()) throw ConfigError("training set is empty");
  if (validation.empty()) throw ConfigError("validation set is empty");

  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  VectorX<double> flat = model.params().Flatten();
  AdamOptimizer adam(flat.size(), config);
  auto grad = ClassifierParams<double>::Zero(model.params().embedding.rows(), model.embedding_dim(),
                                             model.hidden_dim());
  TrainHistory history;
  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(std::span<std::size_t>(order), rng);
    double epoch_loss = 0.0;
    int batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += batch_size, ++batch_index) {
      const std::size_t count = std::min(batch_size, order.size() - start);
      const std::span<const std::size_t> chunk(order.data() + start, count);
      grad.SetZero();
      const double loss = model.LossAndGradient(PackTokens(train, chunk), PackLabels(train, chunk), &grad);
      if (!std::isfinite(loss))
        throw DivergenceError("non-finite training loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                                  std::to_string(batch_index + 1),
                              epoch + 1, batch_index + 1);
      epoch_loss += loss * static_cast<double>(count);
      adam.Step(flat, grad.Flatten());
      model.params().Unflatten(flat);
    }
    history.train_loss.push_back(epoch_loss / static_cast<double>(train.size()));
    const double val = MeanLoss(model, validation);
    if (!std::isfinite(val))
      throw DivergenceError("non-finite validation loss at epoch " + std::to_string(epoch + 1), epoch + 1, 0);
    history.validation_loss.push_back(val);
  }
  return history;
}

Evaluation Evaluate(const Model& model, const std::vector<EncodedExample>& test, double threshold) {
  if (test.empty()) throw ConfigError("test set is empty");
  Evaluation ev;
  std::vector<std::size_t> order(test.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < order.size(); start += kChunk) {
    const std::size_t count = std::min(kChunk, order.size() - start);
    const std::span<const std::size_t> chunk(order.data() + start, count);
    const VectorX<double> probs = model.PredictBatch(PackTokens(test, chunk));
    for (std::size_t b = 0; b < count; ++b)
      ev.counts.Add(probs(static_cast<Eigen::Index>(b)) > threshold, test[chunk[b]].label == 1);
  }
  ev.metrics = metrics::ClassificationMetrics(ev.counts);
  return ev;
}

void Estimator::CheckCompatible() const {
  if (model.vocab_size() != vocabulary.size())
    throw CompatibilityError("model expects a vocabulary of " + std::to_string(model.vocab_size()) +
                             " words, vocabulary has " + std::to_string(vocabulary.size()));
  if (max_len < 1) throw CompatibilityError("max_len must be at least 1");
}

Estimator::Prediction Estimator::Predict(std::string_view raw_text, const textnorm::AbbreviationTable& table) const {
  CheckCompatible();
  const auto ids = vocabulary.Encode(textnorm::NormalizeText(raw_text, table), max_len);
  Prediction p;
  p.probability = model.Predict(ids);
  p.flagged = p.probability > 0.5;
  return p;
}

json Estimator::ToJson() const {
  const VectorX<double> flat = model.params().Flatten();
  return json{{"format", "falsealarm-estimator"},
              {"version", kModelFormatVersion},
              {"max_len", max_len},
              {"vocab_size", vocabulary.size()},
              {"embedding_dim", model.embedding_dim()},
              {"hidden_dim", model.hidden_dim()},
              {"vocabulary", vocabulary.words()},
              {"parameters", std::vector<double>(flat.data(), flat.data() + flat.size())}};
}

Estimator Estimator::FromJson(const json& j) {
  try {
    if (j.value("format", "") != "falsealarm-estimator") throw CompatibilityError("not an estimator model file");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion)
      throw CompatibilityError("unsupported model version " + std::to_string(version));
    Estimator e;
    e.max_len = j.at("max_len").get<int>();
    e.vocabulary = Vocabulary::FromWords(j.at("vocabulary").get<std::vector<std::string>>());
    const auto vocab_size = j.at("vocab_size").get<Eigen::Index>();
    if (vocab_size != e.vocabulary.size()) throw CompatibilityError("vocab_size does not match the vocabulary");
    const auto embed = j.at("embedding_dim").get<Eigen::Index>();
    const auto hidden = j.at("hidden_dim").get<Eigen::Index>();
    if (embed < 1 || hidden < 1) throw CompatibilityError("model dimensions must be positive");
    const auto values = j.at("parameters").get<std::vector<double>>();
    e.model = Model(vocab_size, embed, hidden);
    e.model.params().Unflatten(Eigen::Map<const VectorX<double>>(values.data(), static_cast<Eigen::Index>(values.size())));
    e.CheckCompatible();
    return e;
  } catch (const json::exception& ex) {
    throw CompatibilityError(std::string("malformed model file: ") + ex.what());
  }
}

void Estimator::Save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write model " + path.string());
  out << ToJson().dump() << '\n';
  if (!out) throw IoError("short write to " + path.string());
}

Estimator Estimator::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw CompatibilityError("model file " + path.string() + " is not valid JSON: " + e.what());
  }
  return FromJson(j);
}

}  // namespace fa::estimator
