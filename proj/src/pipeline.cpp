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

#include "fa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>
#include <thread>

#include "fa/errors.hpp"
#include "fa/hash.hpp"

namespace fa::pipeline {
namespace fs = std::filesystem;
using engines::Engine;
using engines::EngineKind;
using nlohmann::json;

std::string_view ToString(CaseOutcome outcome) {
  switch (outcome) {
    case CaseOutcome::kSuccess:
      return "Success";
    case CaseOutcome::kFailed:
      return "Failed";
    case CaseOutcome::kIndeterminable:
      return "Indeterminable";
    case CaseOutcome::kEngineError:
      return "EngineError";
  }
  return "EngineError";
}

std::string_view ToString(FalseAlarmStatus status) {
  switch (status) {
    case FalseAlarmStatus::kNotApplicable:
      return "NotApplicable";
    case FalseAlarmStatus::kPotentialUnconfirmed:
      return "PotentialUnconfirmed";
    case FalseAlarmStatus::kConfirmed:
      return "Confirmed";
  }
  return "NotApplicable";
}

CaseOutcome ParseCaseOutcome(std::string_view s) {
  for (auto o : {CaseOutcome::kSuccess, CaseOutcome::kFailed, CaseOutcome::kIndeterminable, CaseOutcome::kEngineError})
    if (ToString(o) == s) return o;
  throw ConfigError("unknown case outcome '" + std::string(s) + "'");
}

FalseAlarmStatus ParseFalseAlarmStatus(std::string_view s) {
  for (auto f : {FalseAlarmStatus::kNotApplicable, FalseAlarmStatus::kPotentialUnconfirmed,
                 FalseAlarmStatus::kConfirmed})
    if (ToString(f) == s) return f;
  throw ConfigError("unknown false-alarm status '" + std::string(s) + "'");
}

CaseOutcome ClassifyCrossAsr(bool under_test_correct, const std::vector<bool>& others_correct) {
  if (others_correct.empty()) throw ConfigError("CrossASR classification needs at least one other ASR");
  if (under_test_correct) return CaseOutcome::kSuccess;
  const bool any_other = std::find(others_correct.begin(), others_correct.end(), true) != others_correct.end();
  return any_other ? CaseOutcome::kFailed : CaseOutcome::kIndeterminable;
}

FalseAlarmStatus DetermineFalseAlarm(bool human_correct, bool tts_correct, const std::vector<bool>& others_tts_correct,
                                     int min_other_failures) {
  if (others_tts_correct.empty()) throw ConfigError("false-alarm confirmation needs at least one other ASR");
  if (min_other_failures < 1) throw ConfigError("min_other_failures must be at least 1");
  if (!human_correct || tts_correct) return FalseAlarmStatus::kNotApplicable;
  const auto failures = std::count(others_tts_correct.begin(), others_tts_correct.end(), false);
  return failures >= min_other_failures ? FalseAlarmStatus::kConfirmed : FalseAlarmStatus::kPotentialUnconfirmed;
}

const Observation* TestCaseResult::Find(std::string_view asr_id) const {
  for (const auto& o : tts_audio)
    if (o.asr_id == asr_id) return &o;
  return nullptr;
}

namespace {

json BreakdownToJson(const std::optional<metrics::WerBreakdown>& b) {
  if (!b) return nullptr;
  return json{{"insertions", b->insertions},
              {"deletions", b->deletions},
              {"substitutions", b->substitutions},
              {"reference_length", b->reference_length}};
}

std::optional<metrics::WerBreakdown> BreakdownFromJson(const json& j) {
  if (j.is_null()) return std::nullopt;
  metrics::WerBreakdown b;
  b.insertions = j.at("insertions").get<std::int64_t>();
  b.deletions = j.at("deletions").get<std::int64_t>();
  b.substitutions = j.at("substitutions").get<std::int64_t>();
  b.reference_length = j.at("reference_length").get<std::int64_t>();
  return b;
}

json ObservationToJson(const Observation& o) {
  return json{{"asr_id", o.asr_id}, {"transcript", o.transcript}, {"breakdown", BreakdownToJson(o.breakdown)},
              {"error", o.error}};
}

Observation ObservationFromJson(const json& j) {
  Observation o;
  o.asr_id = j.at("asr_id").get<std::string>();
  o.transcript = j.at("transcript").get<std::string>();
  o.breakdown = BreakdownFromJson(j.at("breakdown"));
  o.error = j.value("error", "");
  return o;
}

void Classify(TestCaseResult& r, int min_other_failures) {
  r.fa_status = FalseAlarmStatus::kNotApplicable;
  bool failed_engine = !r.tts_error.empty() || r.tts_audio.size() != r.cross_refs.size() + 1;
  for (const auto& o : r.tts_audio) failed_engine = failed_engine || !o.breakdown;
  if (r.human_audio && !r.human_audio->breakdown) failed_engine = true;
  if (failed_engine) {
    r.outcome = CaseOutcome::kEngineError;
    return;
  }
  const bool under_test_correct = r.tts_audio.front().correct();
  std::vector<bool> others;
  for (std::size_t i = 1; i < r.tts_audio.size(); ++i) others.push_back(r.tts_audio[i].correct());
  r.outcome = ClassifyCrossAsr(under_test_correct, others);
  if (r.human_audio)
    r.fa_status = DetermineFalseAlarm(r.human_audio->correct(), under_test_correct, others, min_other_failures);
}

Observation Observe(const Engine& asr, const Utterance& u, std::string_view source, const fs::path& audio,
                    const textnorm::AbbreviationTable& table) {
  Observation o;
  o.asr_id = asr.id();
  try {
    o.transcript = asr.Transcribe({u.id, std::string(source), audio});
    o.breakdown = metrics::Align(u.normalized, textnorm::NormalizeText(o.transcript, table));
  } catch (const EngineError& e) {
    o.error = e.what();
    if (!e.diagnostics().empty()) o.error += "\n" + e.diagnostics();
  }
  return o;
}

// Synthesizes into the cache unless the clip is already there. Returns the
// error message on engine failure.
std::string EnsureAudio(const Utterance& u, const Engine& tts, const fs::path& path) {
  if (fs::exists(path)) return {};
  fs::create_directories(path.parent_path());
  try {
    tts.Synthesize({u.id, u.raw_text, path});
  } catch (const EngineError& e) {
    std::string msg = e.what();
    if (!e.diagnostics().empty()) msg += "\n" + e.diagnostics();
    return msg;
  }
  return {};
}

void RequireNonEmpty(const Utterance& u) {
  if (u.normalized.empty()) throw ConfigError("utterance '" + u.id + "' has no words after normalization");
}

}  // namespace

void to_json(json& j, const TestCaseResult& r) {
  json tts = json::array();
  for (const auto& o : r.tts_audio) tts.push_back(ObservationToJson(o));
  j = json{{"utterance_id", r.utterance_id},
           {"tts_id", r.tts_id},
           {"asr_under_test", r.asr_under_test},
           {"cross_refs", r.cross_refs},
           {"tts_audio", std::move(tts)},
           {"human_audio", r.human_audio ? ObservationToJson(*r.human_audio) : json(nullptr)},
           {"tts_error", r.tts_error},
           {"outcome", ToString(r.outcome)},
           {"fa_status", ToString(r.fa_status)},
           {"started_at", r.started_at},
           {"finished_at", r.finished_at}};
}

void from_json(const json& j, TestCaseResult& r) {
  r.utterance_id = j.at("utterance_id").get<std::string>();
  r.tts_id = j.at("tts_id").get<std::string>();
  r.asr_under_test = j.at("asr_under_test").get<std::string>();
  r.cross_refs = j.at("cross_refs").get<std::vector<std::string>>();
  r.tts_audio.clear();
  for (const auto& o : j.at("tts_audio")) r.tts_audio.push_back(ObservationFromJson(o));
  r.human_audio.reset();
  if (!j.at("human_audio").is_null()) r.human_audio = ObservationFromJson(j.at("human_audio"));
  r.tts_error = j.value("tts_error", "");
  r.outcome = ParseCaseOutcome(j.at("outcome").get<std::string>());
  r.fa_status = ParseFalseAlarmStatus(j.at("fa_status").get<std::string>());
  r.started_at = j.value("started_at", "");
  r.finished_at = j.value("finished_at", "");
}

std::pair<CaseOutcome, FalseAlarmStatus> Rederive(const TestCaseResult& r, int min_other_failures) {
  TestCaseResult copy = r;
  Classify(copy, min_other_failures);
  return {copy.outcome, copy.fa_status};
}

std::string AudioCacheKey(std::string_view tts_id, std::string_view raw_text, const textnorm::AbbreviationTable& table) {
  std::string payload(tts_id);
  payload.push_back('\0');
  payload += textnorm::Join(textnorm::NormalizeText(raw_text, table));
  return Sha256Hex(payload);
}

AudioCache::AudioCache(fs::path root) : root_(std::move(root)) {}

fs::path AudioCache::PathFor(std::string_view tts_id, std::string_view key) const {
  return root_ / std::string(tts_id) / (std::string(key) + ".wav");
}

bool AudioCache::Contains(std::string_view tts_id, std::string_view key) const {
  return fs::exists(PathFor(tts_id, key));
}

ResultStore::ResultStore(fs::path path) : path_(std::move(path)) {
  if (!fs::exists(*path_)) return;
  std::string content;
  {
    std::ifstream in(*path_, std::ios::binary);
    if (!in) throw IoError("cannot read results " + path_->string());
    content.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  const auto last_newline = content.rfind('\n');
  const std::size_t complete = last_newline == std::string::npos ? 0 : last_newline + 1;
  if (complete < content.size()) {
    ++ignored_lines_;
    fs::resize_file(*path_, complete);
    content.resize(complete);
  }
  std::istringstream lines(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (line.empty()) continue;
    TestCaseResult r;
    try {
      json::parse(line).get_to(r);
    } catch (const std::exception& e) {
      throw IoError(path_->string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
    keys_.emplace(r.utterance_id, r.tts_id, r.asr_under_test);
    results_.push_back(std::move(r));
  }
}

void ResultStore::Append(const TestCaseResult& result) {
  const std::string line = json(result).dump() + "\n";
  std::lock_guard lock(mu_);
  if (path_) {
    std::ofstream out(*path_, std::ios::binary | std::ios::app);
    out << line;
    out.flush();
    if (!out) throw IoError("cannot append to " + path_->string());
  }
  keys_.emplace(result.utterance_id, result.tts_id, result.asr_under_test);
  results_.push_back(result);
}

bool ResultStore::Contains(const std::string& utterance_id, const std::string& tts_id,
                           const std::string& asr_id) const {
  std::lock_guard lock(mu_);
  return keys_.count(Key{utterance_id, tts_id, asr_id}) != 0;
}

std::vector<TestCaseResult> ResultStore::Results() const {
  std::lock_guard lock(mu_);
  return results_;
}

std::size_t ResultStore::size() const {
  std::lock_guard lock(mu_);
  return results_.size();
}

std::vector<TestCaseResult> LoadResults(const fs::path& path) {
  if (!fs::exists(path)) throw IoError("no results file at " + path.string());
  std::ifstream in(path);
  std::vector<TestCaseResult> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(json::parse(line).get<TestCaseResult>());
    } catch (const json::parse_error&) {
      if (in.peek() == std::char_traits<char>::eof()) break;  // truncated final line
      throw IoError(path.string() + " line " + std::to_string(line_no) + ": malformed JSON");
    } catch (const std::exception& e) {
      throw IoError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

TestCaseResult RunCase(const Utterance& utterance, const Engine& tts, const Engine& under_test,
                       const std::vector<const Engine*>& cross_refs, const AudioCache& cache, ResultStore* store,
                       const CaseOptions& options) {
  RequireNonEmpty(utterance);
  if (tts.kind() != EngineKind::kTts) throw ConfigError("'" + tts.id() + "' is not a TTS engine");
  if (under_test.kind() != EngineKind::kAsr) throw ConfigError("'" + under_test.id() + "' is not an ASR engine");
  if (cross_refs.empty()) throw ConfigError("at least one cross-reference ASR is required");
  for (const Engine* e : cross_refs) {
    if (e->kind() != EngineKind::kAsr) throw ConfigError("'" + e->id() + "' is not an ASR engine");
    if (e->id() == under_test.id()) throw ConfigError("cross-references must exclude the ASR under test");
  }

  TestCaseResult r;
  r.started_at = UtcTimestamp();
  r.utterance_id = utterance.id;
  r.tts_id = tts.id();
  r.asr_under_test = under_test.id();
  for (const Engine* e : cross_refs) r.cross_refs.push_back(e->id());

  const fs::path clip = cache.PathFor(tts.id(), AudioCacheKey(tts.id(), utterance.raw_text, *options.table));
  r.tts_error = EnsureAudio(utterance, tts, clip);
  if (r.tts_error.empty()) {
    r.tts_audio.push_back(Observe(under_test, utterance, tts.id(), clip, *options.table));
    for (const Engine* e : cross_refs) r.tts_audio.push_back(Observe(*e, utterance, tts.id(), clip, *options.table));
    if (utterance.human_audio)
      r.human_audio = Observe(under_test, utterance, engines::kHumanSource, *utterance.human_audio, *options.table);
  }
  Classify(r, options.min_other_failures);
  r.finished_at = UtcTimestamp();
  if (store) store->Append(r);
  return r;
}

RunStats RunAll(const std::vector<Utterance>& corpus, const engines::EngineRegistry& registry,
                const RunOptions& options, const AudioCache& cache, ResultStore& store) {
  if (options.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (options.min_other_failures < 1) throw ConfigError("min_other_failures must be at least 1");

  std::vector<const Engine*> ttss;
  if (options.tts_ids.empty()) {
    ttss = registry.OfKind(EngineKind::kTts);
  } else {
    for (const auto& id : options.tts_ids) ttss.push_back(&registry.Get(id));
  }
  std::vector<const Engine*> under_tests;
  if (options.under_test_ids.empty()) {
    under_tests = registry.OfKind(EngineKind::kAsr);
  } else {
    for (const auto& id : options.under_test_ids) under_tests.push_back(&registry.Get(id));
  }
  if (ttss.empty()) throw ConfigError("no TTS engines selected");
  if (under_tests.empty()) throw ConfigError("no ASR under test selected");
  for (const Engine* e : ttss)
    if (e->kind() != EngineKind::kTts) throw ConfigError("'" + e->id() + "' is not a TTS engine");

  std::map<std::string, std::vector<const Engine*>> cross_for;
  for (const Engine* ut : under_tests) {
    if (ut->kind() != EngineKind::kAsr) throw ConfigError("'" + ut->id() + "' is not an ASR engine");
    auto& cross = cross_for[ut->id()];
    if (options.cross_ref_ids.empty()) {
      for (const Engine* e : registry.OfKind(EngineKind::kAsr))
        if (e != ut) cross.push_back(e);
    } else {
      for (const auto& id : options.cross_ref_ids) {
        if (id == ut->id()) throw ConfigError("ASR under test '" + id + "' is also listed as a cross-reference");
        const Engine& e = registry.Get(id);
        if (e.kind() != EngineKind::kAsr) throw ConfigError("'" + id + "' is not an ASR engine");
        cross.push_back(&e);
      }
    }
    if (cross.empty()) throw ConfigError("no cross-reference ASR available for '" + ut->id() + "'");
  }
  for (const auto& u : corpus) RequireNonEmpty(u);

  const textnorm::AbbreviationTable& table = *options.table;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> executed{0};
  std::atomic<std::size_t> skipped{0};
  std::atomic<bool> stop{false};
  std::mutex error_mu;
  std::exception_ptr first_error;

  auto process = [&](const Utterance& u) {
    std::map<std::string, Observation> human;  // per ASR under test
    for (const Engine* tts : ttss) {
      std::vector<const Engine*> pending;
      for (const Engine* ut : under_tests) {
        if (store.Contains(u.id, tts->id(), ut->id())) {
          skipped.fetch_add(1);
        } else {
          pending.push_back(ut);
        }
      }
      if (pending.empty()) continue;
      const std::string started = UtcTimestamp();
      const fs::path clip = cache.PathFor(tts->id(), AudioCacheKey(tts->id(), u.raw_text, table));
      const std::string tts_error = EnsureAudio(u, *tts, clip);

      std::map<std::string, Observation> heard;
      auto observe_tts = [&](const Engine* asr) -> const Observation& {
        auto it = heard.find(asr->id());
        if (it == heard.end()) it = heard.emplace(asr->id(), Observe(*asr, u, tts->id(), clip, table)).first;
        return it->second;
      };

      for (const Engine* ut : pending) {
        if (stop.load()) return;
        TestCaseResult r;
        r.started_at = started;
        r.utterance_id = u.id;
        r.tts_id = tts->id();
        r.asr_under_test = ut->id();
        for (const Engine* e : cross_for[ut->id()]) r.cross_refs.push_back(e->id());
        r.tts_error = tts_error;
        if (tts_error.empty()) {
          r.tts_audio.push_back(observe_tts(ut));
          for (const Engine* e : cross_for[ut->id()]) r.tts_audio.push_back(observe_tts(e));
          if (u.human_audio) {
            auto it = human.find(ut->id());
            if (it == human.end())
              it = human.emplace(ut->id(), Observe(*ut, u, engines::kHumanSource, *u.human_audio, table)).first;
            r.human_audio = it->second;
          }
        }
        Classify(r, options.min_other_failures);
        r.finished_at = UtcTimestamp();
        if (options.stop_after && executed.fetch_add(1) >= *options.stop_after) {
          executed.fetch_sub(1);
          stop.store(true);
          return;
        }
        if (!options.stop_after) executed.fetch_add(1);
        store.Append(r);
      }
    }
  };

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= corpus.size() || stop.load()) return;
      try {
        process(corpus[i]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        stop.store(true);
        return;
      }
    }
  };

  const auto threads = static_cast<std::size_t>(std::min<std::size_t>(options.jobs, std::max<std::size_t>(1, corpus.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return {executed.load(), skipped.load()};
}

void CellSummary::Add(const TestCaseResult& r) {
  ++executed;
  switch (r.outcome) {
    case CaseOutcome::kSuccess:
      ++success;
      break;
    case CaseOutcome::kFailed:
      ++failed;
      break;
    case CaseOutcome::kIndeterminable:
      ++indeterminable;
      break;
    case CaseOutcome::kEngineError:
      ++engine_error;
      return;
  }
  if (r.fa_status == FalseAlarmStatus::kConfirmed) ++confirmed;
  if (r.fa_status == FalseAlarmStatus::kPotentialUnconfirmed) ++potential_unconfirmed;
  if (!r.tts_audio.empty() && r.tts_audio.front().breakdown) {
    const auto& b = *r.tts_audio.front().breakdown;
    wer_tts_sum += metrics::Wer(b);
    ++tts_wer_cases;
    pooled_tts += b;
  }
  if (r.human_audio && r.human_audio->breakdown) {
    const auto& b = *r.human_audio->breakdown;
    wer_human_sum += metrics::Wer(b);
    ++human_wer_cases;
    pooled_human += b;
  }
}

void CellSummary::Merge(const CellSummary& o) {
  executed += o.executed;
  success += o.success;
  failed += o.failed;
  indeterminable += o.indeterminable;
  engine_error += o.engine_error;
  confirmed += o.confirmed;
  potential_unconfirmed += o.potential_unconfirmed;
  tts_wer_cases += o.tts_wer_cases;
  human_wer_cases += o.human_wer_cases;
  wer_tts_sum += o.wer_tts_sum;
  wer_human_sum += o.wer_human_sum;
  pooled_tts += o.pooled_tts;
  pooled_human += o.pooled_human;
}

void CellSummary::Finalize() {
  const std::int64_t valid = executed - engine_error;
  fa_rate = valid > 0 ? static_cast<double>(confirmed) / static_cast<double>(valid) : 0.0;
  mean_wer_tts = tts_wer_cases > 0 ? wer_tts_sum / static_cast<double>(tts_wer_cases) : 0.0;
  mean_wer_human = human_wer_cases > 0 ? wer_human_sum / static_cast<double>(human_wer_cases) : 0.0;
}

double CellSummary::pooled_wer_tts() const {
  return pooled_tts.reference_length > 0 ? metrics::Wer(pooled_tts) : 0.0;
}

double CellSummary::pooled_wer_human() const {
  return pooled_human.reference_length > 0 ? metrics::Wer(pooled_human) : 0.0;
}

RunSummary Aggregate(std::vector<TestCaseResult> results) {
  std::sort(results.begin(), results.end(), [](const TestCaseResult& a, const TestCaseResult& b) {
    return std::tie(a.tts_id, a.asr_under_test, a.utterance_id) < std::tie(b.tts_id, b.asr_under_test, b.utterance_id);
  });
  RunSummary s;
  for (const auto& r : results) s.cells[{r.tts_id, r.asr_under_test}].Add(r);
  for (const auto& [key, cell] : s.cells) {
    s.tts_totals[key.first].Merge(cell);
    s.asr_totals[key.second].Merge(cell);
    s.total.Merge(cell);
  }
  for (auto& [key, cell] : s.cells) cell.Finalize();
  for (auto& [id, cell] : s.tts_totals) {
    cell.Finalize();
    s.tts_ids.push_back(id);
  }
  for (auto& [id, cell] : s.asr_totals) {
    cell.Finalize();
    s.asr_ids.push_back(id);
  }
  s.total.Finalize();
  return s;
}

namespace {

json CellToJson(const CellSummary& c) {
  return json{{"executed", c.executed},
              {"outcomes",
               {{"Success", c.success},
                {"Failed", c.failed},
                {"Indeterminable", c.indeterminable},
                {"EngineError", c.engine_error}}},
              {"false_alarms", c.confirmed},
              {"potential_unconfirmed", c.potential_unconfirmed},
              {"false_alarm_rate", c.fa_rate},
              {"mean_wer_tts", c.mean_wer_tts},
              {"mean_wer_human", c.mean_wer_human},
              {"pooled_wer_tts", c.pooled_wer_tts()},
              {"pooled_wer_human", c.pooled_wer_human()},
              {"tts_wer_cases", c.tts_wer_cases},
              {"human_wer_cases", c.human_wer_cases}};
}

std::string FormatDouble(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

// Renders a TTS x ASR grid with a Total column and row.
template <typename CellFn>
std::string Grid(const RunSummary& s, const std::string& title, CellFn cell) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"TTS \\ ASR"};
  for (const auto& a : s.asr_ids) header.push_back(a);
  header.push_back("Total");
  rows.push_back(header);
  for (const auto& t : s.tts_ids) {
    std::vector<std::string> row{t};
    for (const auto& a : s.asr_ids) {
      auto it = s.cells.find({t, a});
      row.push_back(it == s.cells.end() ? "-" : cell(it->second));
    }
    row.push_back(cell(s.tts_totals.at(t)));
    rows.push_back(row);
  }
  std::vector<std::string> total_row{"Total"};
  for (const auto& a : s.asr_ids) total_row.push_back(cell(s.asr_totals.at(a)));
  total_row.push_back(cell(s.total));
  rows.push_back(total_row);

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream os;
  os << title << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c == 0) {
        os << std::left << std::setw(static_cast<int>(width[c])) << row[c];
      } else {
        os << "  " << std::right << std::setw(static_cast<int>(width[c])) << row[c];
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace

json SummaryToJson(const RunSummary& s) {
  json cells = json::array();
  for (const auto& [key, cell] : s.cells) {
    json c = CellToJson(cell);
    c["tts"] = key.first;
    c["asr"] = key.second;
    cells.push_back(std::move(c));
  }
  json tts_totals = json::object();
  for (const auto& [id, cell] : s.tts_totals) tts_totals[id] = CellToJson(cell);
  json asr_totals = json::object();
  for (const auto& [id, cell] : s.asr_totals) asr_totals[id] = CellToJson(cell);
  return json{{"tts", s.tts_ids},     {"asr", s.asr_ids},           {"cells", std::move(cells)},
              {"tts_totals", tts_totals}, {"asr_totals", asr_totals}, {"total", CellToJson(s.total)}};
}

std::string SummaryToText(const RunSummary& s) {
  std::ostringstream os;
  os << Grid(s, "Number of false alarms", [](const CellSummary& c) { return std::to_string(c.confirmed); }) << "\n";
  os << Grid(s, "False-alarm rate (% of executed test cases)",
             [](const CellSummary& c) { return FormatDouble(100.0 * c.fa_rate, 2); })
     << "\n";
  os << Grid(s, "Outcomes (success/failed/indeterminable/engine-error)",
             [](const CellSummary& c) {
               return std::to_string(c.success) + "/" + std::to_string(c.failed) + "/" +
                      std::to_string(c.indeterminable) + "/" + std::to_string(c.engine_error);
             })
     << "\n";
  os << Grid(s, "Average WER on TTS audio (per-utterance mean)",
             [](const CellSummary& c) { return FormatDouble(c.mean_wer_tts, 4); })
     << "\n";
  os << Grid(s, "Average WER on human audio (per-utterance mean)",
             [](const CellSummary& c) { return FormatDouble(c.mean_wer_human, 4); });
  return os.str();
}

}  // namespace fa::pipeline
