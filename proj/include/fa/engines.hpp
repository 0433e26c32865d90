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

// Adapter boundary over TTS and ASR engines.
//
// External adapters follow a fixed command protocol:
//   TTS:  <cmd...> --text-file <in.txt> --out <out.wav>
//   ASR:  <cmd...> --audio <in.wav>      (transcription on stdout, exit 0)
//
// Built-in mocks run in process. A mock TTS writes a placeholder waveform
// plus a `.meta` JSON sidecar carrying the scripted transcription; a mock ASR
// reads that sidecar instead of decoding speech.

#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fa/audio.hpp"
#include "json.hpp"

namespace fa::engines {

enum class EngineKind { kTts, kAsr };

std::string_view ToString(EngineKind kind);

/// Deterministic text corruption applied by mock engines.
struct MockBehavior {
  enum class Kind {
    kVerbatim,
    kDropSuffixes,  // strips -ing/-ed/-s when at least three letters remain
    kSubstitute,    // whole-word replacement `from` -> `to`
    kGarble,        // word at `word_index` (mod length) gets a "zq" suffix
    kScripted,      // emits `text` regardless of input
    kFail,          // raises EngineError
  };
  Kind kind = Kind::kVerbatim;
  std::string from;
  std::string to;
  std::string text;
  int word_index = -1;

  std::string Apply(std::string_view input) const;
};

/// Behavior override for one (utterance id, audio source) pair. Either field
/// may be "*". The source of TTS audio is the TTS engine id; human recordings
/// use the source "human".
struct MockRule {
  std::string utterance_id = "*";
  std::string source = "*";
  MockBehavior behavior;
};

struct MockSpec {
  MockBehavior default_behavior;
  std::vector<MockRule> rules;

  /// First matching rule wins; falls back to the default.
  const MockBehavior& BehaviorFor(std::string_view utterance_id, std::string_view source) const;
};

struct ExternalCommand {
  std::vector<std::string> argv;
};

struct EngineDescriptor {
  std::string id;
  EngineKind kind = EngineKind::kAsr;
  std::variant<ExternalCommand, MockSpec> invocation;
  double timeout_seconds = 120.0;
};

constexpr std::string_view kHumanSource = "human";

struct SynthesisRequest {
  std::string utterance_id;
  std::string text;
  std::filesystem::path out_path;
};

struct TranscriptionRequest {
  std::string utterance_id;
  std::string source;
  std::filesystem::path audio_path;
};

/// Sidecar path for a WAV file: same stem, `.meta` extension.
std::filesystem::path SidecarPath(const std::filesystem::path& wav_path);

/// Reads the `transcript` field of a sidecar. Throws IoError when missing.
std::string ReadSidecarTranscript(const std::filesystem::path& wav_path);
void WriteSidecar(const std::filesystem::path& wav_path, const nlohmann::json& meta);

class Engine {
 public:
  explicit Engine(EngineDescriptor descriptor);
  virtual ~Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const EngineDescriptor& descriptor() const { return descriptor_; }
  const std::string& id() const { return descriptor_.id; }
  EngineKind kind() const { return descriptor_.kind; }

  /// Leaves a standardized WAV at `out_path`; on failure nothing is left
  /// there. Throws EngineError.
  void Synthesize(const SynthesisRequest& request) const;

  /// Raw transcription, possibly empty. Throws EngineError.
  std::string Transcribe(const TranscriptionRequest& request) const;

  std::size_t invocations() const { return invocations_.load(); }

 protected:
  virtual void DoSynthesize(const SynthesisRequest& request) const = 0;
  virtual std::string DoTranscribe(const TranscriptionRequest& request) const = 0;

 private:
  EngineDescriptor descriptor_;
  mutable std::atomic<std::size_t> invocations_{0};
};

class MockEngine final : public Engine {
 public:
  explicit MockEngine(EngineDescriptor descriptor);

 protected:
  void DoSynthesize(const SynthesisRequest& request) const override;
  std::string DoTranscribe(const TranscriptionRequest& request) const override;

 private:
  const MockSpec& spec() const { return std::get<MockSpec>(descriptor().invocation); }
};

class ExternalEngine final : public Engine {
 public:
  explicit ExternalEngine(EngineDescriptor descriptor);

 protected:
  void DoSynthesize(const SynthesisRequest& request) const override;
  std::string DoTranscribe(const TranscriptionRequest& request) const override;

 private:
  const ExternalCommand& command() const { return std::get<ExternalCommand>(descriptor().invocation); }
};

std::unique_ptr<Engine> MakeEngine(EngineDescriptor descriptor);

/// Read-only after load.
class EngineRegistry {
 public:
  EngineRegistry() = default;

  /// {"engines": [ {id, kind, mock|command, timeout?, script?}, ... ]}
  static EngineRegistry FromJson(const nlohmann::json& config);
  static EngineRegistry FromFile(const std::filesystem::path& path);

  void Add(EngineDescriptor descriptor);

  const Engine& Get(std::string_view id) const;
  bool Contains(std::string_view id) const;
  std::vector<const Engine*> OfKind(EngineKind kind) const;
  std::size_t size() const { return engines_.size(); }

 private:
  std::vector<std::unique_ptr<Engine>> engines_;
};

MockBehavior ParseMockBehavior(const nlohmann::json& j);
EngineDescriptor ParseEngineDescriptor(const nlohmann::json& j);

/// Placeholder waveform written by mock TTS engines: a short 8-bit 16 kHz
/// tone whose pitch and length depend only on `text`.
audio::AudioClip PlaceholderWaveform(std::string_view text);

/// Directory used for adapter scratch files: $FA_ADAPTER_TMPDIR when set,
/// otherwise the system temp directory.
std::filesystem::path AdapterTempRoot();

}  // namespace fa::engines
