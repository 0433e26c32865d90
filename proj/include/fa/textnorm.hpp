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

// Text normalization shared by ground-truth texts and ASR transcriptions.
//
// The pipeline is fixed: case-fold, abbreviation expansion, numeral
// conversion, punctuation strip, whitespace split. Output tokens consist of
// ASCII lowercase letters and apostrophes only, and always contain at least
// one letter.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fa::textnorm {

using TokenSequence = std::vector<std::string>;

/// Case-insensitive abbreviation -> expansion map. Keys are stored
/// lowercased without a trailing period; expansions are normalized tokens.
class AbbreviationTable {
 public:
  AbbreviationTable() = default;

  /// mr, mrs, dr, st, etc.
  static const AbbreviationTable& Defaults();

  /// Parses `abbrev<TAB>expansion` lines; `#` starts a comment line.
  /// Throws ConfigError on malformed lines, duplicate keys, or an expansion
  /// that contains a key (which would break idempotence).
  static AbbreviationTable FromStream(std::istream& in);
  static AbbreviationTable FromFile(const std::filesystem::path& path);

  void Add(std::string_view abbreviation, std::string_view expansion);

  /// Lookup ignores case and one trailing period.
  const TokenSequence* Find(std::string_view word) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, TokenSequence, std::less<>> entries_;
};

/// Full normalization. Never throws; empty input yields an empty sequence.
TokenSequence NormalizeText(std::string_view raw,
                            const AbbreviationTable& table = AbbreviationTable::Defaults());

/// English cardinal words, American style (no "and", no hyphens).
/// Throws UnsupportedMagnitudeError for values >= 10^12 and
/// std::invalid_argument when `numeral` is empty or has a non-digit.
TokenSequence NumberToWords(std::string_view numeral);

/// Replaces every token with a table match (ignoring one trailing period).
TokenSequence ExpandAbbreviations(const TokenSequence& tokens,
                                  const AbbreviationTable& table);

/// True when `token` is a valid normalized token.
bool IsNormalizedToken(std::string_view token);

std::string Join(const TokenSequence& tokens, std::string_view sep = " ");

}  // namespace fa::textnorm
