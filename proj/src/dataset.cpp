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

#include "fa/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "fa/errors.hpp"
#include "fa/random.hpp"

namespace fa::dataset {
namespace fs = std::filesystem;

namespace {

std::vector<std::string> SplitFields(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Reads all lines; a final newline does not start an extra line.
std::vector<std::string> ReadLines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw IoError("read error on " + path.string());
  return lines;
}

}  // namespace

Utterance MakeUtterance(std::string id, std::string raw_text, std::optional<fs::path> human_audio,
                        const textnorm::AbbreviationTable& table) {
  Utterance u;
  u.id = std::move(id);
  u.raw_text = std::move(raw_text);
  u.normalized = textnorm::NormalizeText(u.raw_text, table);
  u.human_audio = std::move(human_audio);
  return u;
}

LoadReport LoadLjSpeech(const fs::path& metadata, const fs::path& wav_dir,
                        const textnorm::AbbreviationTable& table) {
  LoadReport report;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  for (auto& line : ReadLines(metadata)) {
    ++line_no;
    if (line.empty()) continue;
    ++report.lines;
    const auto fields = SplitFields(line, '|');
    if (fields.size() < 2 || fields.size() > 3 || fields[0].empty()) {
      ++report.malformed;
      report.problems.push_back("line " + std::to_string(line_no) + ": expected id|text|normalized");
      continue;
    }
    if (!seen.insert(fields[0]).second) {
      ++report.malformed;
      report.problems.push_back("line " + std::to_string(line_no) + ": duplicate id " + fields[0]);
      continue;
    }
    const std::string& text = fields.size() == 3 && !fields[2].empty() ? fields[2] : fields[1];
    const fs::path wav = wav_dir / (fields[0] + ".wav");
    Utterance u = MakeUtterance(fields[0], text, wav, table);
    if (u.normalized.empty()) {
      ++report.dropped;
      report.problems.push_back("line " + std::to_string(line_no) + ": empty text for " + fields[0]);
      continue;
    }
    if (!fs::exists(wav)) {
      ++report.dropped;
      report.problems.push_back("line " + std::to_string(line_no) + ": missing recording " + wav.string());
      continue;
    }
    report.utterances.push_back(std::move(u));
  }
  return report;
}

LoadReport LoadManifest(const fs::path& tsv, const textnorm::AbbreviationTable& table) {
  LoadReport report;
  std::unordered_set<std::string> seen;
  const fs::path base = tsv.parent_path();
  std::size_t line_no = 0;
  for (auto& line : ReadLines(tsv)) {
    ++line_no;
    if (line.empty() || line.starts_with('#')) continue;  // blank, comment, or header
    ++report.lines;
    const auto fields = SplitFields(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      ++report.malformed;
      report.problems.push_back("line " + std::to_string(line_no) + ": expected id<TAB>audio<TAB>text");
      continue;
    }
    if (!seen.insert(fields[0]).second)
      throw ConfigError(tsv.string() + " line " + std::to_string(line_no) + ": duplicate id " + fields[0]);
    std::optional<fs::path> audio;
    if (fields[1] != "-") {
      fs::path p = fields[1];
      audio = p.is_absolute() ? p : base / p;
    }
    Utterance u = MakeUtterance(fields[0], fields[2], audio, table);
    if (u.normalized.empty()) {
      ++report.dropped;
      report.problems.push_back("line " + std::to_string(line_no) + ": empty text for " + fields[0]);
      continue;
    }
    if (u.human_audio && !fs::exists(*u.human_audio)) {
      report.problems.push_back("line " + std::to_string(line_no) + ": missing recording " +
                                u.human_audio->string());
      u.human_audio.reset();
      u.audio_missing = true;
    }
    report.utterances.push_back(std::move(u));
  }
  return report;
}

std::vector<Utterance> Sample(const std::vector<Utterance>& corpus, std::size_t n, std::uint64_t seed) {
  if (n >= corpus.size()) return corpus;
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  Shuffle(std::span<std::size_t>(order), rng);
  order.resize(n);
  std::sort(order.begin(), order.end());
  std::vector<Utterance> out;
  out.reserve(n);
  for (std::size_t i : order) out.push_back(corpus[i]);
  return out;
}

}  // namespace fa::dataset
