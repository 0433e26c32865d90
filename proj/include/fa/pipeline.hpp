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

// Test-case execution, CrossASR outcome classification, false-alarm
// determination, the audio cache, the JSON-lines results store, and
// aggregation into per-(TTS, ASR) summaries.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "fa/dataset.hpp"
#include "fa/engines.hpp"
#include "fa/metrics.hpp"
#include "json.hpp"

namespace fa::pipeline {

using dataset::Utterance;

enum class CaseOutcome { kSuccess, kFailed, kIndeterminable, kEngineError };
enum class FalseAlarmStatus { kNotApplicable, kPotentialUnconfirmed, kConfirmed };

std::string_view ToString(CaseOutcome outcome);
std::string_view ToString(FalseAlarmStatus status);
CaseOutcome ParseCaseOutcome(std::string_view s);
FalseAlarmStatus ParseFalseAlarmStatus(std::string_view s);

/// Success if the ASR under test is correct; Failed if it is wrong and some
/// other ASR is right; Indeterminable if every ASR is wrong.
/// Throws ConfigError when `others_correct` is empty.
CaseOutcome ClassifyCrossAsr(bool under_test_correct, const std::vector<bool>& others_correct);

/// A potential false alarm is a case whose human recording the ASR under
/// test transcribes correctly while failing on the TTS audio. It is
/// confirmed once at least `min_other_failures` cross-reference ASRs also
/// fail on the same TTS audio. Throws ConfigError when `others_tts_correct`
/// is empty or `min_other_failures` < 1.
FalseAlarmStatus DetermineFalseAlarm(bool human_correct, bool tts_correct,
                                     const std::vector<bool>& others_tts_correct, int min_other_failures = 1);

/// One ASR's transcription of one audio file. `breakdown` is absent when the
/// engine failed.
struct Observation {
  std::string asr_id;
  std::string transcript;
  std::optional<metrics::WerBreakdown> breakdown;
  std::string error;

  bool correct() const { return breakdown && breakdown->errors() == 0; }
};

struct TestCaseResult {
  std::string utterance_id;
  std::string tts_id;
  std::string asr_under_test;
  std::vector<std::string> cross_refs;
  /// Under-test ASR first, then cross-references in `cross_refs` order.
  std::vector<Observation> tts_audio;
  std::optional<Observation> human_audio;
  std::string tts_error;
  CaseOutcome outcome = CaseOutcome::kEngineError;
  FalseAlarmStatus fa_status = FalseAlarmStatus::kNotApplicable;
  std::string started_at;
  std::string finished_at;

  const Observation* Find(std::string_view asr_id) const;
};

void to_json(nlohmann::json& j, const TestCaseResult& r);
void from_json(const nlohmann::json& j, TestCaseResult& r);

/// Recomputes (outcome, fa_status) from the stored breakdowns.
std::pair<CaseOutcome, FalseAlarmStatus> Rederive(const TestCaseResult& r, int min_other_failures = 1);

/// Hex SHA-256 of (tts id, normalized text).
std::string AudioCacheKey(std::string_view tts_id, std::string_view raw_text,
                          const textnorm::AbbreviationTable& table = textnorm::AbbreviationTable::Defaults());

/// `<root>/<tts-id>/<key>.wav`, plus a `.meta` sidecar for mock engines.
class AudioCache {
 public:
  explicit AudioCache(std::filesystem::path root);

  std::filesystem::path PathFor(std::string_view tts_id, std::string_view key) const;
  bool Contains(std::string_view tts_id, std::string_view key) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

/// Append-only JSON-lines store of TestCaseResult. Appends are serialized;
/// a truncated trailing line (crash mid-write) is ignored on open.
class ResultStore {
 public:
  using Key = std::tuple<std::string, std::string, std::string>;  // utterance, tts, asr

  /// In-memory store.
  ResultStore() = default;
  /// Loads any existing results at `path`; later appends go to that file.
  explicit ResultStore(std::filesystem::path path);

  void Append(const TestCaseResult& result);
  bool Contains(const std::string& utterance_id, const std::string& tts_id, const std::string& asr_id) const;
  std::vector<TestCaseResult> Results() const;
  std::size_t size() const;
  std::size_t ignored_lines() const { return ignored_lines_; }

 private:
  std::optional<std::filesystem::path> path_;
  mutable std::mutex mu_;
  std::vector<TestCaseResult> results_;
  std::set<Key> keys_;
  std::size_t ignored_lines_ = 0;
};

std::vector<TestCaseResult> LoadResults(const std::filesystem::path& path);

struct CaseOptions {
  int min_other_failures = 1;
  const textnorm::AbbreviationTable* table = &textnorm::AbbreviationTable::Defaults();
};

/// Executes one test case: synthesize (or reuse cached) audio, transcribe it
/// with the ASR under test and every cross-reference ASR, transcribe the
/// human recording with the ASR under test, and classify. Engine failures
/// yield outcome EngineError with whatever observations were collected.
/// The result is appended to `store` when one is given.
TestCaseResult RunCase(const Utterance& utterance, const engines::Engine& tts, const engines::Engine& under_test,
                       const std::vector<const engines::Engine*>& cross_refs, const AudioCache& cache,
                       ResultStore* store, const CaseOptions& options = {});

struct RunOptions {
  std::vector<std::string> tts_ids;          // empty: every TTS engine
  std::vector<std::string> under_test_ids;   // empty: every ASR engine
  std::vector<std::string> cross_ref_ids;    // empty: all ASRs except the one under test
  int jobs = 1;
  int min_other_failures = 1;
  const textnorm::AbbreviationTable* table = &textnorm::AbbreviationTable::Defaults();
  /// Stop after this many new results (simulates an interrupted run).
  std::optional<std::size_t> stop_after;
};

struct RunStats {
  std::size_t executed = 0;
  std::size_t skipped = 0;
};

/// Runs every (utterance x TTS x ASR-under-test) case missing from `store`.
/// Each ASR transcribes a given TTS clip once per utterance, and each human
/// recording once per ASR under test. Throws ConfigError on bad options.
RunStats RunAll(const std::vector<Utterance>& corpus, const engines::EngineRegistry& registry,
                const RunOptions& options, const AudioCache& cache, ResultStore& store);

/// Aggregates for one (TTS, ASR-under-test) cell, or a row/column total.
struct CellSummary {
  std::int64_t executed = 0;
  std::int64_t success = 0;
  std::int64_t failed = 0;
  std::int64_t indeterminable = 0;
  std::int64_t engine_error = 0;
  std::int64_t confirmed = 0;
  std::int64_t potential_unconfirmed = 0;
  double fa_rate = 0.0;  // confirmed / (executed - engine_error)
  double mean_wer_tts = 0.0;
  double mean_wer_human = 0.0;
  std::int64_t tts_wer_cases = 0;
  std::int64_t human_wer_cases = 0;
  metrics::WerBreakdown pooled_tts;
  metrics::WerBreakdown pooled_human;

  // Per-utterance WER sums behind the means.
  double wer_tts_sum = 0.0;
  double wer_human_sum = 0.0;

  void Add(const TestCaseResult& r);
  void Merge(const CellSummary& other);
  void Finalize();
  double pooled_wer_tts() const;
  double pooled_wer_human() const;
};

struct RunSummary {
  std::vector<std::string> tts_ids;
  std::vector<std::string> asr_ids;
  std::map<std::pair<std::string, std::string>, CellSummary> cells;  // (tts, asr)
  std::map<std::string, CellSummary> tts_totals;
  std::map<std::string, CellSummary> asr_totals;
  CellSummary total;
};

/// Results are processed in (tts, asr, utterance) order, so the summary does
/// not depend on execution order.
RunSummary Aggregate(std::vector<TestCaseResult> results);

nlohmann::json SummaryToJson(const RunSummary& summary);
/// Aligned text tables: false-alarm counts with totals, false-alarm rates,
/// outcome counts, and mean WER on TTS and human audio.
std::string SummaryToText(const RunSummary& summary);

std::string UtcTimestamp();

}  // namespace fa::pipeline
