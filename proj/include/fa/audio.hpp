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

// RIFF/WAVE integer PCM decode/encode and conversion to the transcription
// format (16 kHz, 8-bit, mono).

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace fa::audio {

constexpr int kStandardRate = 16000;
constexpr int kStandardDepth = 8;

/// Decoded PCM. `samples` is frames x channels, amplitudes in [-1, 1].
struct AudioClip {
  int sample_rate = kStandardRate;
  int bit_depth = kStandardDepth;
  Eigen::MatrixXd samples = Eigen::MatrixXd(0, 1);

  Eigen::Index frames() const { return samples.rows(); }
  Eigen::Index channels() const { return samples.cols(); }

  /// Throws FormatError when the invariants do not hold.
  void Validate() const;

  bool operator==(const AudioClip& other) const;
};

/// 8-bit data is unsigned with a 0x80 midpoint; wider depths are signed.
/// Throws FormatError (with byte offset) for malformed or non-PCM input.
AudioClip ReadWav(std::span<const std::uint8_t> bytes);
AudioClip ReadWavFile(const std::filesystem::path& path);

/// Canonical encoding: 44-byte header (RIFF, 16-byte fmt chunk, data chunk),
/// round-to-nearest quantization, pad byte on odd-sized data.
std::vector<std::uint8_t> WriteWav(const AudioClip& clip);
void WriteWavFile(const AudioClip& clip, const std::filesystem::path& path);

/// Channel mean, linear-interpolation resample to 16 kHz, 8-bit
/// re-quantization. Idempotent; empty clips pass through unchanged.
AudioClip Standardize(const AudioClip& clip);

/// Rounds `amplitude` onto the signed grid of `bit_depth` and clamps to
/// the representable range.
double Quantize(double amplitude, int bit_depth);

}  // namespace fa::audio
