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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace fa {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: registries, run settings, abbreviation tables.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A ratio whose denominator is zero (empty reference, empty evaluation).
class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMagnitudeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported audio container. Carries the byte offset at
/// which decoding stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// A TTS or ASR engine failed: nonzero exit, timeout, or unusable output.
class EngineError : public Error {
 public:
  EngineError(std::string engine_id, const std::string& what,
              std::string diagnostics = {})
      : Error(engine_id + ": " + what),
        engine_id_(std::move(engine_id)),
        diagnostics_(std::move(diagnostics)) {}

  const std::string& engine_id() const noexcept { return engine_id_; }
  const std::string& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::string engine_id_;
  std::string diagnostics_;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

/// Raised when training produces a non-finite loss.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, int epoch, int batch)
      : Error(what), epoch_(epoch), batch_(batch) {}

  int epoch() const noexcept { return epoch_; }
  int batch() const noexcept { return batch_; }

 private:
  int epoch_;
  int batch_;
};

/// Labels are inconsistent (count above the combination total, or only one
/// class present where two are required).
class LabelingError : public Error {
 public:
  using Error::Error;
};

/// A model file and a vocabulary (or a model file and this build) disagree.
class CompatibilityError : public Error {
 public:
  using Error::Error;
};

}  // namespace fa
