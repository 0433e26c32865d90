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

// `fa`: run false-alarm experiments, score transcripts, and train or apply
// the text-only false-alarm estimator.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "fa/dataset.hpp"
#include "fa/engines.hpp"
#include "fa/errors.hpp"
#include "fa/estimator.hpp"
#include "fa/hash.hpp"
#include "fa/metrics.hpp"
#include "fa/pipeline.hpp"
#include "fa/textnorm.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fa::IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFileAtomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw fa::IoError("cannot write " + tmp.string());
    out << content;
    if (!out) throw fa::IoError("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::vector<std::string> ReadLines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

struct CorpusOptions {
  std::string path;
  std::string format = "tsv";
  std::string wav_dir;
  std::string abbrev;
};

void AddCorpusOptions(CLI::App* cmd, CorpusOptions& o, bool required) {
  auto* corpus = cmd->add_option("--corpus", o.path, "Corpus file (LJSpeech metadata.csv or TSV manifest)");
  if (required) corpus->required();
  cmd->add_option("--format", o.format, "Corpus format")
      ->check(CLI::IsMember({"ljspeech", "tsv"}))
      ->capture_default_str();
  cmd->add_option("--wav-dir", o.wav_dir, "LJSpeech recordings directory (default: <corpus dir>/wavs)");
  cmd->add_option("--abbrev", o.abbrev, "Abbreviation table (tab-separated) replacing the built-in one");
}

fa::textnorm::AbbreviationTable LoadTable(const std::string& path) {
  if (path.empty()) return fa::textnorm::AbbreviationTable::Defaults();
  return fa::textnorm::AbbreviationTable::FromFile(path);
}

fa::dataset::LoadReport LoadCorpus(const CorpusOptions& o, const fa::textnorm::AbbreviationTable& table) {
  if (!fs::exists(o.path)) throw fa::ConfigError("corpus not found: " + o.path);
  fa::dataset::LoadReport report;
  if (o.format == "ljspeech") {
    const fs::path wavs = o.wav_dir.empty() ? fs::path(o.path).parent_path() / "wavs" : fs::path(o.wav_dir);
    report = fa::dataset::LoadLjSpeech(o.path, wavs, table);
  } else {
    report = fa::dataset::LoadManifest(o.path, table);
  }
  for (const auto& p : report.problems) std::cerr << "corpus: " << p << '\n';
  return report;
}

// ---------------------------------------------------------------- run

struct RunArgs {
  CorpusOptions corpus;
  std::string engines;
  std::vector<std::string> tts;
  std::vector<std::string> under_test;
  std::vector<std::string> cross_refs;
  std::string out;
  std::string cache;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 0;
  std::optional<std::size_t> sample;
  int min_other_failures = 1;
  bool quiet = false;
};

int CmdRun(const RunArgs& a) {
  for (const auto& id : a.under_test)
    if (std::find(a.cross_refs.begin(), a.cross_refs.end(), id) != a.cross_refs.end())
      throw fa::ConfigError("ASR '" + id + "' is both under test and a cross-reference");
  if (a.jobs < 1) throw fa::ConfigError("--jobs must be at least 1");
  if (!fs::exists(a.engines)) throw fa::ConfigError("engine registry not found: " + a.engines);

  const auto table = LoadTable(a.corpus.abbrev);
  const auto registry = fa::engines::EngineRegistry::FromFile(a.engines);
  auto report = LoadCorpus(a.corpus, table);
  std::vector<fa::dataset::Utterance> corpus = std::move(report.utterances);
  if (a.sample) corpus = fa::dataset::Sample(corpus, *a.sample, a.seed);
  if (corpus.empty()) throw fa::ConfigError("corpus has no usable utterances");

  const fs::path out(a.out);
  fs::create_directories(out);
  const fs::path cache_root = a.cache.empty() ? out / "cache" : fs::path(a.cache);

  // The configuration that determines results; a resumed run must match it.
  json config{{"corpus", fs::absolute(a.corpus.path).lexically_normal().string()},
              {"corpus_sha256", fa::Sha256HexOfFile(a.corpus.path)},
              {"format", a.corpus.format},
              {"engines", fs::absolute(a.engines).lexically_normal().string()},
              {"engines_sha256", fa::Sha256HexOfFile(a.engines)},
              {"abbreviations_sha256", a.corpus.abbrev.empty() ? "" : fa::Sha256HexOfFile(a.corpus.abbrev)},
              {"tts", a.tts},
              {"asr_under_test", a.under_test},
              {"cross_refs", a.cross_refs},
              {"seed", a.seed},
              {"sample", a.sample ? json(*a.sample) : json(nullptr)},
              {"min_other_failures", a.min_other_failures}};
  const fs::path manifest_path = out / "manifest.json";
  if (fs::exists(manifest_path)) {
    const json previous = json::parse(ReadFile(manifest_path));
    if (previous.value("config", json()) != config)
      throw fa::ConfigError("output directory " + out.string() +
                            " holds a run with a different configuration; use a fresh --out");
  }

  fa::pipeline::RunOptions options;
  options.tts_ids = a.tts;
  options.under_test_ids = a.under_test;
  options.cross_ref_ids = a.cross_refs;
  options.jobs = a.jobs;
  options.min_other_failures = a.min_other_failures;
  options.table = &table;

  json manifest{{"tool", "fa"},
                {"version", kVersion},
                {"config", config},
                {"jobs", a.jobs},
                {"utterances", corpus.size()},
                {"corpus_lines", report.lines},
                {"corpus_dropped", report.dropped},
                {"corpus_malformed", report.malformed},
                {"started_at", fa::pipeline::UtcTimestamp()}};
  WriteFileAtomically(manifest_path, manifest.dump(2) + "\n");

  fa::pipeline::AudioCache cache(cache_root);
  fa::pipeline::ResultStore store(out / "results.jsonl");
  const auto stats = fa::pipeline::RunAll(corpus, registry, options, cache, store);

  auto results = store.Results();
  std::size_t engine_errors = 0;
  for (const auto& r : results)
    if (r.outcome == fa::pipeline::CaseOutcome::kEngineError) ++engine_errors;
  const auto summary = fa::pipeline::Aggregate(std::move(results));
  const std::string text = fa::pipeline::SummaryToText(summary);

  manifest["finished_at"] = fa::pipeline::UtcTimestamp();
  manifest["executed"] = stats.executed;
  manifest["skipped"] = stats.skipped;
  manifest["results"] = store.size();
  manifest["engine_errors"] = engine_errors;
  WriteFileAtomically(manifest_path, manifest.dump(2) + "\n");
  WriteFileAtomically(out / "summary.json", fa::pipeline::SummaryToJson(summary).dump(2) + "\n");
  WriteFileAtomically(out / "summary.txt", text);

  if (!a.quiet) std::cout << text;
  std::cerr << "executed " << stats.executed << ", resumed past " << stats.skipped << ", engine errors "
            << engine_errors << '\n';
  return 0;
}

// ---------------------------------------------------------------- wer

int CmdWer(const std::string& ref_path, const std::string& hyp_path, bool as_json, const std::string& abbrev) {
  const auto table = LoadTable(abbrev);
  const auto ref = fa::textnorm::NormalizeText(ReadFile(ref_path), table);
  const auto hyp = fa::textnorm::NormalizeText(ReadFile(hyp_path), table);
  const auto b = fa::metrics::Align(ref, hyp);
  const auto frac = fa::metrics::WerFraction(b);
  if (as_json) {
    std::cout << json{{"wer", fa::metrics::Wer(b)},
                      {"numerator", frac.numerator},
                      {"denominator", frac.denominator},
                      {"insertions", b.insertions},
                      {"deletions", b.deletions},
                      {"substitutions", b.substitutions},
                      {"reference_length", b.reference_length}}
                     .dump()
              << '\n';
  } else {
    std::cout << std::setprecision(6) << "WER " << fa::metrics::Wer(b) << " (" << frac.numerator << "/"
              << frac.denominator << ")  I=" << b.insertions << " D=" << b.deletions << " S=" << b.substitutions
              << " N=" << b.reference_length << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- normalize

int CmdNormalize(const std::vector<std::string>& texts, const std::string& file, const std::string& abbrev) {
  const auto table = LoadTable(abbrev);
  auto emit = [&](const std::string& s) { std::cout << fa::textnorm::Join(fa::textnorm::NormalizeText(s, table)) << '\n'; };
  for (const auto& t : texts) emit(t);
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw fa::IoError("cannot open " + file);
    for (const auto& line : ReadLines(in)) emit(line);
  }
  if (texts.empty() && file.empty())
    for (const auto& line : ReadLines(std::cin)) emit(line);
  return 0;
}

// ---------------------------------------------------------------- train-estimator

struct LabeledRow {
  fa::estimator::LabeledText label;
  std::string text;
};

std::vector<LabeledRow> ReadLabeled(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw fa::IoError("cannot open " + path.string());
  std::vector<LabeledRow> rows;
  std::size_t n = 0;
  for (const auto& line : ReadLines(in)) {
    ++n;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      LabeledRow r;
      r.label.text_id = j.at("text_id").get<std::string>();
      r.label.fa_count = j.at("fa_count").get<int>();
      r.label.combos = j.at("combos").get<int>();
      r.label.label = j.at("label").get<int>();
      r.text = j.at("text").get<std::string>();
      if (r.label.label != 0 && r.label.label != 1)
        throw fa::LabelingError(path.string() + ":" + std::to_string(n) + ": label must be 0 or 1");
      rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw fa::ConfigError(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<LabeledRow> LabelFromResults(const std::vector<std::string>& result_files,
                                         const std::vector<fa::dataset::Utterance>& corpus, int min_other_failures) {
  std::map<std::string, std::string> texts;
  for (const auto& u : corpus) texts.emplace(u.id, u.raw_text);

  std::set<std::pair<std::string, std::string>> combos;
  std::map<std::string, int> counts;
  for (const auto& file : result_files) {
    for (const auto& r : fa::pipeline::LoadResults(file)) {
      combos.emplace(r.tts_id, r.asr_under_test);
      if (!texts.count(r.utterance_id))
        throw fa::ConfigError("result for utterance '" + r.utterance_id + "' has no text in the corpus");
      counts.try_emplace(r.utterance_id, 0);
      if (fa::pipeline::Rederive(r, min_other_failures).second == fa::pipeline::FalseAlarmStatus::kConfirmed)
        ++counts[r.utterance_id];
    }
  }
  if (combos.empty()) throw fa::ConfigError("no results found");
  std::vector<LabeledRow> rows;
  for (auto& l : fa::estimator::LabelTexts(counts, static_cast<int>(combos.size())))
    rows.push_back({l, texts.at(l.text_id)});
  return rows;
}

struct TrainArgs {
  std::vector<std::string> results;
  CorpusOptions corpus;
  std::string labeled;
  std::string out;
  int min_other_failures = 1;
  std::optional<int> max_len;
  fa::estimator::TrainConfig config;
};

std::string FormatMetrics(const fa::estimator::Evaluation& ev) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "precision " << 100.0 * ev.metrics.precision << "%\n"
     << "recall    " << 100.0 * ev.metrics.recall << "%\n"
     << "accuracy  " << 100.0 * ev.metrics.accuracy << "%\n"
     << "F1        " << 100.0 * ev.metrics.f1 << "%\n"
     << "confusion tp=" << ev.counts.true_positives << " fp=" << ev.counts.false_positives << " fn=" << ev.counts.false_negatives << " tn=" << ev.counts.true_negatives
     << '\n';
  return os.str();
}

int CmdTrain(const TrainArgs& a) {
  namespace est = fa::estimator;
  const auto table = LoadTable(a.corpus.abbrev);
  std::vector<LabeledRow> rows;
  if (!a.labeled.empty()) {
    rows = ReadLabeled(a.labeled);
  } else {
    if (a.results.empty() || a.corpus.path.empty())
      throw fa::ConfigError("train-estimator needs --labeled, or --results together with --corpus");
    rows = LabelFromResults(a.results, LoadCorpus(a.corpus, table).utterances, a.min_other_failures);
  }
  if (rows.empty()) throw fa::LabelingError("no labeled texts");
  std::set<int> classes;
  for (const auto& r : rows) classes.insert(r.label.label);
  if (classes.size() < 2) throw fa::LabelingError("all texts carry the same label; need both classes to train");

  const fs::path out(a.out);
  fs::create_directories(out);
  {
    std::ostringstream ss;
    for (const auto& r : rows)
      ss << json{{"text_id", r.label.text_id},
                 {"fa_count", r.label.fa_count},
                 {"combos", r.label.combos},
                 {"label", r.label.label},
                 {"text", r.text}}
                .dump()
         << '\n';
    WriteFileAtomically(out / "labeled.jsonl", ss.str());
  }

  // Split on row indices, then build the vocabulary and length from the
  // training part only.
  std::vector<est::EncodedExample> placeholders;
  for (std::size_t i = 0; i < rows.size(); ++i) placeholders.push_back({{}, rows[i].label.label, std::to_string(i)});
  auto split = est::SplitDataset(std::move(placeholders), a.config.seed);
  if (split.train.empty() || split.validation.empty() || split.test.empty())
    throw fa::ConfigError("dataset too small to split (" + std::to_string(rows.size()) + " texts)");

  std::vector<fa::textnorm::TokenSequence> tokens(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) tokens[i] = fa::textnorm::NormalizeText(rows[i].text, table);
  std::vector<fa::textnorm::TokenSequence> train_tokens;
  std::size_t longest = 1;
  for (const auto& e : split.train) {
    train_tokens.push_back(tokens[std::stoul(e.text_id)]);
    longest = std::max(longest, train_tokens.back().size());
  }
  est::Estimator estimator;
  estimator.vocabulary = est::Vocabulary::Build(train_tokens);
  estimator.max_len = a.max_len.value_or(static_cast<int>(longest));
  auto encode = [&](std::vector<est::EncodedExample>& set) {
    for (auto& e : set) {
      const std::size_t i = std::stoul(e.text_id);
      e.ids = estimator.vocabulary.Encode(tokens[i], estimator.max_len);
      e.text_id = rows[i].label.text_id;
    }
  };
  encode(split.train);
  encode(split.validation);
  encode(split.test);

  fa::Rng init_rng(a.config.seed);
  estimator.model = est::Model::Initialized(estimator.vocabulary.size(), a.config.embedding_dim, a.config.hidden_dim,
                                            init_rng);
  const auto history = est::Train(estimator.model, split.train, split.validation, a.config);
  const auto ev = est::Evaluate(estimator.model, split.test);
  estimator.Save(out / "model.json");

  json report{{"texts", rows.size()},
              {"train", split.train.size()},
              {"validation", split.validation.size()},
              {"test", split.test.size()},
              {"vocabulary_size", estimator.vocabulary.size()},
              {"max_len", estimator.max_len},
              {"epochs", a.config.epochs},
              {"seed", a.config.seed},
              {"train_loss", history.train_loss},
              {"validation_loss", history.validation_loss},
              {"precision", ev.metrics.precision},
              {"recall", ev.metrics.recall},
              {"accuracy", ev.metrics.accuracy},
              {"f1", ev.metrics.f1},
              {"confusion", {{"tp", ev.counts.true_positives}, {"fp", ev.counts.false_positives}, {"fn", ev.counts.false_negatives}, {"tn", ev.counts.true_negatives}}}};
  WriteFileAtomically(out / "report.json", report.dump(2) + "\n");
  const std::string text = FormatMetrics(ev);
  WriteFileAtomically(out / "report.txt", text);
  std::cout << text;
  return 0;
}

// ---------------------------------------------------------------- predict

int CmdPredict(const std::string& model_path, const std::vector<std::string>& texts, const std::string& file,
               const std::string& abbrev) {
  const auto table = LoadTable(abbrev);
  const auto estimator = fa::estimator::Estimator::Load(model_path);
  auto emit = [&](const std::string& s) {
    const auto p = estimator.Predict(s, table);
    std::printf("%.6f\t%d\t%s\n", p.probability, p.flagged ? 1 : 0, s.c_str());
  };
  for (const auto& t : texts) emit(t);
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw fa::IoError("cannot open " + file);
    for (const auto& line : ReadLines(in)) emit(line);
  }
  if (texts.empty() && file.empty())
    for (const auto& line : ReadLines(std::cin)) emit(line);
  return 0;
}

// ---------------------------------------------------------------- report

int CmdReport(const std::vector<std::string>& files, const std::string& out, int min_other_failures, bool as_json) {
  std::vector<fa::pipeline::TestCaseResult> results;
  for (const auto& f : files) {
    if (!fs::exists(f)) throw fa::ConfigError("results file not found: " + f);
    for (auto& r : fa::pipeline::LoadResults(f)) {
      std::tie(r.outcome, r.fa_status) = fa::pipeline::Rederive(r, min_other_failures);
      results.push_back(std::move(r));
    }
  }
  const auto summary = fa::pipeline::Aggregate(std::move(results));
  const std::string text = fa::pipeline::SummaryToText(summary);
  const std::string js = fa::pipeline::SummaryToJson(summary).dump(2) + "\n";
  if (!out.empty()) {
    fs::create_directories(out);
    WriteFileAtomically(fs::path(out) / "summary.json", js);
    WriteFileAtomically(fs::path(out) / "summary.txt", text);
  }
  std::cout << (as_json ? js : text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"False-alarm detection for ASR testing with synthesized audio"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Execute test cases and write results, manifest, and summary");
  AddCorpusOptions(run_cmd, run.corpus, true);
  run_cmd->add_option("--engines", run.engines, "Engine registry JSON")->required();
  run_cmd->add_option("--tts", run.tts, "TTS engine ids (default: all)");
  run_cmd->add_option("--asr-under-test", run.under_test, "ASR ids under test (default: all)");
  run_cmd->add_option("--cross-ref", run.cross_refs, "Cross-reference ASR ids (default: all other ASRs)");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--cache", run.cache, "Audio cache directory (default: <out>/cache)");
  run_cmd->add_option("--jobs", run.jobs, "Parallel workers")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Seed for corpus sampling")->capture_default_str();
  run_cmd->add_option("--sample", run.sample, "Use a seeded random sample of this many utterances");
  run_cmd->add_option("--min-other-failures", run.min_other_failures,
                      "Cross-reference failures needed to confirm a false alarm")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_flag("--quiet", run.quiet, "Do not print the summary");

  std::string wer_ref, wer_hyp, wer_abbrev;
  bool wer_json = false;
  auto* wer_cmd = app.add_subcommand("wer", "Word error rate of a hypothesis file against a reference file");
  wer_cmd->add_option("reference", wer_ref, "Reference text file")->required();
  wer_cmd->add_option("hypothesis", wer_hyp, "Hypothesis text file")->required();
  wer_cmd->add_flag("--json", wer_json, "Print JSON");
  wer_cmd->add_option("--abbrev", wer_abbrev, "Abbreviation table");

  std::vector<std::string> norm_texts;
  std::string norm_file, norm_abbrev;
  auto* norm_cmd = app.add_subcommand("normalize", "Normalize text (arguments, --file, or stdin; one line each)");
  norm_cmd->add_option("text", norm_texts, "Texts to normalize");
  norm_cmd->add_option("--file", norm_file, "File with one text per line");
  norm_cmd->add_option("--abbrev", norm_abbrev, "Abbreviation table");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train-estimator", "Label texts from results and train the estimator");
  train_cmd->add_option("--results", train.results, "results.jsonl files");
  AddCorpusOptions(train_cmd, train.corpus, false);
  train_cmd->add_option("--labeled", train.labeled, "Labeled-dataset JSONL instead of --results/--corpus");
  train_cmd->add_option("--out", train.out, "Output directory")->required();
  train_cmd->add_option("--min-other-failures", train.min_other_failures)->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", train.config.seed)->capture_default_str();
  train_cmd->add_option("--epochs", train.config.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", train.config.batch_size)->capture_default_str();
  train_cmd->add_option("--learning-rate", train.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--embedding-dim", train.config.embedding_dim)->capture_default_str();
  train_cmd->add_option("--hidden-dim", train.config.hidden_dim)->capture_default_str();
  train_cmd->add_option("--max-len", train.max_len, "Sequence length (default: longest training text)");

  std::string pred_model, pred_file, pred_abbrev;
  std::vector<std::string> pred_texts;
  auto* pred_cmd = app.add_subcommand("predict", "Estimate false-alarm probability for texts");
  pred_cmd->add_option("--model", pred_model, "Model file")->required();
  pred_cmd->add_option("text", pred_texts, "Texts");
  pred_cmd->add_option("--file", pred_file, "File with one text per line");
  pred_cmd->add_option("--abbrev", pred_abbrev, "Abbreviation table");

  std::vector<std::string> report_files;
  std::string report_out;
  int report_min_other = 1;
  bool report_json = false;
  auto* report_cmd = app.add_subcommand("report", "Summarize results files");
  report_cmd->add_option("results", report_files, "results.jsonl files")->required();
  report_cmd->add_option("--out", report_out, "Write summary.json and summary.txt here");
  report_cmd->add_option("--min-other-failures", report_min_other)->check(CLI::PositiveNumber);
  report_cmd->add_flag("--json", report_json, "Print JSON instead of tables");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return CmdRun(run);
    if (*wer_cmd) return CmdWer(wer_ref, wer_hyp, wer_json, wer_abbrev);
    if (*norm_cmd) return CmdNormalize(norm_texts, norm_file, norm_abbrev);
    if (*train_cmd) return CmdTrain(train);
    if (*pred_cmd) return CmdPredict(pred_model, pred_texts, pred_file, pred_abbrev);
    if (*report_cmd) return CmdReport(report_files, report_out, report_min_other, report_json);
  } catch (const fa::Error& e) {
    std::cerr << "fa: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "fa: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
