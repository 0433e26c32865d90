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

// Corpus loaders: LJ Speech `metadata.csv` and a generic TSV manifest.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fa/textnorm.hpp"

namespace fa::dataset {

struct Utterance {
  std::string id;
  std::string raw_text;
  textnorm::TokenSequence normalized;
  std::optional<std::filesystem::path> human_audio;
  /// Manifest referenced a recording that does not exist.
  bool audio_missing = false;
};

Utterance MakeUtterance(std::string id, std::string raw_text,
                        std::optional<std::filesystem::path> human_audio = std::nullopt,
                        const textnorm::AbbreviationTable& table = textnorm::AbbreviationTable::Defaults());

struct LoadReport {
  std::vector<Utterance> utterances;
  std::size_t lines = 0;      // nonblank, non-comment lines read
  std::size_t dropped = 0;    // empty text or missing recording
  std::size_t malformed = 0;  // wrong field count, empty id
  std::vector<std::string> problems;
};

/// `id|transcription|normalized_transcription` lines; the recording is
/// `<wav_dir>/<id>.wav`. Entries whose text normalizes to nothing or whose
/// recording is missing are dropped and counted.
LoadReport LoadLjSpeech(const std::filesystem::path& metadata, const std::filesystem::path& wav_dir,
                        const textnorm::AbbreviationTable& table = textnorm::AbbreviationTable::Defaults());

/// `id<TAB>audio_path<TAB>text` lines; `-` means no recording. Blank lines
/// and lines starting with `#` are skipped. Relative
/// audio paths resolve against the manifest's directory. Throws ConfigError
/// on a duplicate id.
LoadReport LoadManifest(const std::filesystem::path& tsv,
                        const textnorm::AbbreviationTable& table = textnorm::AbbreviationTable::Defaults());

/// Seeded subset of `n` utterances, kept in corpus order.
std::vector<Utterance> Sample(const std::vector<Utterance>& corpus, std::size_t n, std::uint64_t seed);

}  // namespace fa::dataset
