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

#include "fa/textnorm.hpp"

#include <array>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fa/errors.hpp"

namespace fa::textnorm {
namespace {

constexpr std::array<const char*, 20> kOnes = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};

constexpr std::array<const char*, 10> kTens = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};

constexpr std::array<const char*, 4> kScales = {"", "thousand", "million", "billion"};

constexpr std::uint64_t kMaxSupported = 1'000'000'000'000ULL;

bool IsLetter(char c) { return c >= 'a' && c <= 'z'; }
bool IsWordChar(char c) { return IsLetter(c) || c == '\''; }
bool IsDigit(char c) { return c >= '0' && c <= '9'; }

bool IsCardinalWord(std::string_view w) {
  for (const char* s : kOnes)
    if (w == s) return true;
  for (const char* s : kTens)
    if (*s != '\0' && w == s) return true;
  for (const char* s : kScales)
    if (*s != '\0' && w == s) return true;
  return w == "hundred";
}

void AppendBelowThousand(unsigned value, TokenSequence& out) {
  if (value >= 100) {
    out.emplace_back(kOnes[value / 100]);
    out.emplace_back("hundred");
    value %= 100;
    if (value == 0) return;
  }
  if (value >= 20) {
    out.emplace_back(kTens[value / 10]);
    if (value % 10 != 0) out.emplace_back(kOnes[value % 10]);
  } else {
    out.emplace_back(kOnes[value]);
  }
}

// Case-folds to ASCII. U+2019 becomes an apostrophe; every other non-ASCII
// code point, control character, or invalid UTF-8 byte becomes a space.
std::string FoldToAscii(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    const auto b = static_cast<unsigned char>(raw[i]);
    if (b < 0x80) {
      char c = static_cast<char>(b);
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      if (b < 0x20 || b == 0x7f) c = ' ';
      out.push_back(c);
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    }
    bool valid = len != 0 && i + len <= raw.size();
    for (std::size_t k = 1; valid && k < len; ++k) {
      const auto cont = static_cast<unsigned char>(raw[i + k]);
      if ((cont & 0xC0) != 0x80) valid = false;
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (!valid) {
      out.push_back(' ');
      ++i;
      continue;
    }
    out.push_back(cp == 0x2019 ? '\'' : ' ');
    i += len;
  }
  return out;
}

std::string ExpandAbbreviationRuns(const std::string& text, const AbbreviationTable& table) {
  if (table.empty()) return text;
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsWordChar(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && IsWordChar(text[j])) ++j;
    const std::string_view run(text.data() + i, j - i);
    if (const TokenSequence* expansion = table.Find(run)) {
      out += Join(*expansion);
    } else {
      out.append(run);
    }
    i = j;
  }
  return out;
}

// Digit runs of 10^12 or more are read digit by digit.
std::string ConvertNumerals(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsDigit(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && IsDigit(text[j])) ++j;
    const std::string_view run(text.data() + i, j - i);
    TokenSequence words;
    try {
      words = NumberToWords(run);
    } catch (const UnsupportedMagnitudeError&) {
      for (char d : run) words.emplace_back(kOnes[d - '0']);
    }
    out.push_back(' ');
    out += Join(words);
    out.push_back(' ');
    i = j;
  }
  return out;
}

std::string LowerAscii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string_view StripTrailingPeriod(std::string_view s) {
  if (!s.empty() && s.back() == '.') s.remove_suffix(1);
  return s;
}

TokenSequence SplitWhitespace(std::string_view s) {
  TokenSequence out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

const AbbreviationTable& AbbreviationTable::Defaults() {
  static const AbbreviationTable table = [] {
    AbbreviationTable t;
    t.Add("mr", "mister");
    t.Add("mrs", "missus");
    t.Add("dr", "doctor");
    t.Add("st", "saint");
    t.Add("etc", "et cetera");
    return t;
  }();
  return table;
}

void AbbreviationTable::Add(std::string_view abbreviation, std::string_view expansion) {
  std::string key = LowerAscii(StripTrailingPeriod(abbreviation));
  if (key.empty() || !IsNormalizedToken(key))
    throw ConfigError("abbreviation key '" + std::string(abbreviation) +
                      "' must be letters and apostrophes only");
  if (IsCardinalWord(key))
    throw ConfigError("abbreviation key '" + key + "' collides with a numeral word");
  TokenSequence words = SplitWhitespace(LowerAscii(expansion));
  if (words.empty()) throw ConfigError("abbreviation '" + key + "' has an empty expansion");
  for (const auto& w : words) {
    if (!IsNormalizedToken(w))
      throw ConfigError("expansion word '" + w + "' for '" + key + "' is not a normalized token");
    if (w == key || entries_.count(w) != 0)
      throw ConfigError("expansion of '" + key + "' contains abbreviation '" + w + "'");
  }
  for (const auto& [existing, expansion_words] : entries_)
    for (const auto& w : expansion_words)
      if (w == key)
        throw ConfigError("abbreviation '" + key + "' appears in the expansion of '" + existing + "'");
  if (!entries_.emplace(std::move(key), std::move(words)).second)
    throw ConfigError("duplicate abbreviation '" + std::string(abbreviation) + "'");
}

const TokenSequence* AbbreviationTable::Find(std::string_view word) const {
  const std::string key = LowerAscii(StripTrailingPeriod(word));
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

AbbreviationTable AbbreviationTable::FromStream(std::istream& in) {
  AbbreviationTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ConfigError("abbreviation table line " + std::to_string(line_no) +
                        ": expected abbrev<TAB>expansion");
    table.Add(std::string_view(line).substr(0, tab), std::string_view(line).substr(tab + 1));
  }
  return table;
}

AbbreviationTable AbbreviationTable::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open abbreviation table " + path.string());
  return FromStream(in);
}

bool IsNormalizedToken(std::string_view token) {
  bool has_letter = false;
  for (char c : token) {
    if (!IsWordChar(c)) return false;
    has_letter = has_letter || IsLetter(c);
  }
  return has_letter;
}

std::string Join(const TokenSequence& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i != 0) out.append(sep);
    out += tokens[i];
  }
  return out;
}

TokenSequence NumberToWords(std::string_view numeral) {
  if (numeral.empty()) throw std::invalid_argument("empty numeral");
  std::size_t first = 0;
  for (char c : numeral)
    if (!IsDigit(c)) throw std::invalid_argument("numeral contains a non-digit: " + std::string(numeral));
  while (first + 1 < numeral.size() && numeral[first] == '0') ++first;
  const std::string_view digits = numeral.substr(first);
  if (digits.size() > 12)
    throw UnsupportedMagnitudeError("numeral " + std::string(numeral) + " is 10^12 or larger");
  std::uint64_t value = 0;
  for (char c : digits) value = value * 10 + static_cast<std::uint64_t>(c - '0');
  if (value >= kMaxSupported)
    throw UnsupportedMagnitudeError("numeral " + std::string(numeral) + " is 10^12 or larger");
  if (value == 0) return {"zero"};

  std::array<unsigned, 4> groups{};
  for (auto& g : groups) {
    g = static_cast<unsigned>(value % 1000);
    value /= 1000;
  }
  TokenSequence out;
  for (int scale = 3; scale >= 0; --scale) {
    const unsigned g = groups[static_cast<std::size_t>(scale)];
    if (g == 0) continue;
    AppendBelowThousand(g, out);
    if (scale > 0) out.emplace_back(kScales[static_cast<std::size_t>(scale)]);
  }
  return out;
}

TokenSequence ExpandAbbreviations(const TokenSequence& tokens, const AbbreviationTable& table) {
  TokenSequence out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (const TokenSequence* expansion = table.Find(token)) {
      out.insert(out.end(), expansion->begin(), expansion->end());
    } else {
      out.push_back(token);
    }
  }
  return out;
}

TokenSequence NormalizeText(std::string_view raw, const AbbreviationTable& table) {
  std::string text = FoldToAscii(raw);
  text = ExpandAbbreviationRuns(text, table);
  text = ConvertNumerals(text);
  for (char& c : text)
    if (!IsWordChar(c)) c = ' ';
  TokenSequence tokens = SplitWhitespace(text);
  std::erase_if(tokens, [](const std::string& t) { return !IsNormalizedToken(t); });
  return tokens;
}

}  // namespace fa::textnorm
