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

#include "fa/engines.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "fa/errors.hpp"
#include "fa/subprocess.hpp"

namespace fa::engines {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t kMaxDiagnostics = 4096;

std::vector<std::string> SplitWords(std::string_view s) {
  std::vector<std::string> words;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out.push_back(' ');
    out += words[i];
  }
  return out;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string DropSuffix(const std::string& word) {
  for (std::string_view suffix : {"ing", "ed", "s"}) {
    if (EndsWith(word, suffix) && word.size() - suffix.size() >= 3) return word.substr(0, word.size() - suffix.size());
  }
  return word;
}

std::string Truncate(std::string s) {
  if (s.size() > kMaxDiagnostics) s.resize(kMaxDiagnostics);
  return s;
}

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void RemoveQuietly(const fs::path& p) {
  std::error_code ec;
  fs::remove(p, ec);
}

// Moves `tmp_wav` (and its sidecar, when present) onto `out_wav`. The sidecar
// is renamed first so a visible WAV always has its sidecar.
void PublishWav(const fs::path& tmp_wav, const fs::path& out_wav) {
  const fs::path tmp_meta = SidecarPath(tmp_wav);
  if (fs::exists(tmp_meta)) fs::rename(tmp_meta, SidecarPath(out_wav));
  fs::rename(tmp_wav, out_wav);
}

MockBehavior::Kind ParseKind(const std::string& name) {
  using K = MockBehavior::Kind;
  if (name == "verbatim") return K::kVerbatim;
  if (name == "drop-suffixes") return K::kDropSuffixes;
  if (name == "substitute") return K::kSubstitute;
  if (name == "garble") return K::kGarble;
  if (name == "scripted") return K::kScripted;
  if (name == "fail") return K::kFail;
  throw ConfigError("unknown mock behavior '" + name + "'");
}

}  // namespace

std::string_view ToString(EngineKind kind) { return kind == EngineKind::kTts ? "tts" : "asr"; }

std::string MockBehavior::Apply(std::string_view input) const {
  switch (kind) {
    case Kind::kVerbatim:
      return std::string(input);
    case Kind::kDropSuffixes: {
      auto words = SplitWords(input);
      for (auto& w : words) w = DropSuffix(w);
      return JoinWords(words);
    }
    case Kind::kSubstitute: {
      auto words = SplitWords(input);
      for (auto& w : words)
        if (w == from) w = to;
      return JoinWords(words);
    }
    case Kind::kGarble: {
      auto words = SplitWords(input);
      if (words.empty()) return std::string(input);
      const auto n = static_cast<long>(words.size());
      const long idx = ((word_index % n) + n) % n;
      words[static_cast<std::size_t>(idx)] += "zq";
      return JoinWords(words);
    }
    case Kind::kScripted:
      return text;
    case Kind::kFail:
      break;
  }
  throw Error("scripted engine failure");
}

const MockBehavior& MockSpec::BehaviorFor(std::string_view utterance_id, std::string_view source) const {
  for (const auto& rule : rules) {
    const bool id_ok = rule.utterance_id == "*" || rule.utterance_id == utterance_id;
    const bool source_ok = rule.source == "*" || rule.source == source;
    if (id_ok && source_ok) return rule.behavior;
  }
  return default_behavior;
}

fs::path SidecarPath(const fs::path& wav_path) {
  fs::path p = wav_path;
  p.replace_extension(".meta");
  return p;
}

std::string ReadSidecarTranscript(const fs::path& wav_path) {
  const fs::path meta = SidecarPath(wav_path);
  std::ifstream in(meta);
  if (!in) throw IoError("missing sidecar " + meta.string());
  try {
    const json j = json::parse(in);
    return j.at("transcript").get<std::string>();
  } catch (const json::exception& e) {
    throw IoError("malformed sidecar " + meta.string() + ": " + e.what());
  }
}

void WriteSidecar(const fs::path& wav_path, const json& meta) {
  std::ofstream out(SidecarPath(wav_path), std::ios::trunc);
  if (!out) throw IoError("cannot write sidecar for " + wav_path.string());
  out << meta.dump() << '\n';
}

audio::AudioClip PlaceholderWaveform(std::string_view text) {
  const std::uint64_t h = Fnv1a(text);
  const double frequency = 200.0 + static_cast<double>(h % 600);
  const auto words = static_cast<Eigen::Index>(SplitWords(text).size());
  const Eigen::Index frames = audio::kStandardRate / 10 + words * (audio::kStandardRate / 20);
  audio::AudioClip clip;
  clip.samples.resize(frames, 1);
  for (Eigen::Index i = 0; i < frames; ++i) {
    const double t = static_cast<double>(i) / audio::kStandardRate;
    clip.samples(i, 0) = audio::Quantize(0.5 * std::sin(2.0 * std::numbers::pi * frequency * t), audio::kStandardDepth);
  }
  return clip;
}

fs::path AdapterTempRoot() {
  if (const char* dir = std::getenv("FA_ADAPTER_TMPDIR"); dir != nullptr && *dir != '\0') return dir;
  return fs::temp_directory_path();
}

Engine::Engine(EngineDescriptor descriptor) : descriptor_(std::move(descriptor)) {
  if (descriptor_.id.empty()) throw ConfigError("engine id must be nonempty");
  if (!(descriptor_.timeout_seconds > 0.0))
    throw ConfigError("engine '" + descriptor_.id + "': timeout must be positive");
}

void Engine::Synthesize(const SynthesisRequest& request) const {
  if (kind() != EngineKind::kTts) throw ConfigError("engine '" + id() + "' is not a TTS engine");
  if (request.text.empty()) throw ConfigError("cannot synthesize empty text");
  invocations_.fetch_add(1);
  DoSynthesize(request);
}

std::string Engine::Transcribe(const TranscriptionRequest& request) const {
  if (kind() != EngineKind::kAsr) throw ConfigError("engine '" + id() + "' is not an ASR engine");
  invocations_.fetch_add(1);
  return DoTranscribe(request);
}

MockEngine::MockEngine(EngineDescriptor descriptor) : Engine(std::move(descriptor)) {}

void MockEngine::DoSynthesize(const SynthesisRequest& request) const {
  std::string transcript;
  try {
    transcript = spec().BehaviorFor(request.utterance_id, id()).Apply(request.text);
  } catch (const Error& e) {
    throw EngineError(id(), e.what());
  }
  const fs::path tmp = UniqueSiblingPath(request.out_path, "partial");
  try {
    audio::WriteWavFile(PlaceholderWaveform(transcript), tmp);
    WriteSidecar(tmp, json{{"engine", id()}, {"text", request.text}, {"transcript", transcript}});
    PublishWav(tmp, request.out_path);
  } catch (const std::exception& e) {
    RemoveQuietly(tmp);
    RemoveQuietly(SidecarPath(tmp));
    throw EngineError(id(), std::string("cannot write mock audio: ") + e.what());
  }
}

std::string MockEngine::DoTranscribe(const TranscriptionRequest& request) const {
  try {
    audio::ReadWavFile(request.audio_path);
    const std::string heard = ReadSidecarTranscript(request.audio_path);
    return spec().BehaviorFor(request.utterance_id, request.source).Apply(heard);
  } catch (const Error& e) {
    throw EngineError(id(), e.what());
  }
}

ExternalEngine::ExternalEngine(EngineDescriptor descriptor) : Engine(std::move(descriptor)) {
  if (command().argv.empty()) throw ConfigError("engine '" + id() + "': empty command");
}

void ExternalEngine::DoSynthesize(const SynthesisRequest& request) const {
  std::optional<TempDir> scratch;
  try {
    scratch.emplace(AdapterTempRoot(), "fa-tts-");
  } catch (const std::exception& e) {
    throw EngineError(id(), e.what());
  }
  const fs::path text_file = scratch->path() / "in.txt";
  const fs::path produced = scratch->path() / "out.wav";
  {
    std::ofstream out(text_file, std::ios::binary);
    out << request.text;
    if (!out) throw EngineError(id(), "cannot write " + text_file.string());
  }
  auto argv = command().argv;
  argv.insert(argv.end(), {"--text-file", text_file.string(), "--out", produced.string()});

  ProcessResult result;
  try {
    result = RunProcess(argv, std::chrono::duration<double>(descriptor().timeout_seconds));
  } catch (const IoError& e) {
    throw EngineError(id(), e.what());
  }
  if (result.timed_out) throw EngineError(id(), "timed out", Truncate(result.standard_error));
  if (result.exit_code != 0)
    throw EngineError(id(), "adapter exited with status " + std::to_string(result.exit_code),
                      Truncate(result.standard_error));
  if (!fs::exists(produced)) throw EngineError(id(), "adapter produced no output file", Truncate(result.standard_error));

  const fs::path tmp = UniqueSiblingPath(request.out_path, "partial");
  try {
    audio::WriteWavFile(audio::Standardize(audio::ReadWavFile(produced)), tmp);
    if (fs::exists(SidecarPath(produced))) fs::copy_file(SidecarPath(produced), SidecarPath(tmp));
    PublishWav(tmp, request.out_path);
  } catch (const std::exception& e) {
    RemoveQuietly(tmp);
    RemoveQuietly(SidecarPath(tmp));
    throw EngineError(id(), std::string("unusable adapter output: ") + e.what(), Truncate(result.standard_error));
  }
}

std::string ExternalEngine::DoTranscribe(const TranscriptionRequest& request) const {
  if (!fs::exists(request.audio_path)) throw EngineError(id(), "missing audio " + request.audio_path.string());
  auto argv = command().argv;
  argv.insert(argv.end(), {"--audio", request.audio_path.string()});
  ProcessResult result;
  try {
    result = RunProcess(argv, std::chrono::duration<double>(descriptor().timeout_seconds));
  } catch (const IoError& e) {
    throw EngineError(id(), e.what());
  }
  if (result.timed_out) throw EngineError(id(), "timed out", Truncate(result.standard_error));
  if (result.exit_code != 0)
    throw EngineError(id(), "adapter exited with status " + std::to_string(result.exit_code),
                      Truncate(result.standard_error));
  std::string text = std::move(result.standard_output);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

std::unique_ptr<Engine> MakeEngine(EngineDescriptor descriptor) {
  if (std::holds_alternative<MockSpec>(descriptor.invocation))
    return std::make_unique<MockEngine>(std::move(descriptor));
  return std::make_unique<ExternalEngine>(std::move(descriptor));
}

MockBehavior ParseMockBehavior(const json& j) {
  MockBehavior b;
  if (j.is_string()) {
    b.kind = ParseKind(j.get<std::string>());
  } else if (j.is_object()) {
    b.kind = ParseKind(j.at("behavior").get<std::string>());
    b.from = j.value("from", "");
    b.to = j.value("to", "");
    b.text = j.value("text", "");
    b.word_index = j.value("word", -1);
  } else {
    throw ConfigError("mock behavior must be a name or an object");
  }
  if (b.kind == MockBehavior::Kind::kSubstitute && b.from.empty())
    throw ConfigError("substitute behavior needs a nonempty 'from'");
  return b;
}

EngineDescriptor ParseEngineDescriptor(const json& j) {
  try {
    EngineDescriptor d;
    d.id = j.at("id").get<std::string>();
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "tts") {
      d.kind = EngineKind::kTts;
    } else if (kind == "asr") {
      d.kind = EngineKind::kAsr;
    } else {
      throw ConfigError("engine '" + d.id + "': kind must be 'tts' or 'asr'");
    }
    d.timeout_seconds = j.value("timeout", 120.0);
    const bool has_mock = j.contains("mock");
    const bool has_command = j.contains("command");
    if (has_mock == has_command)
      throw ConfigError("engine '" + d.id + "' needs exactly one of 'mock' or 'command'");
    if (has_command) {
      auto argv = j.at("command").get<std::vector<std::string>>();
      if (argv.empty() || argv.front().empty())
        throw ConfigError("engine '" + d.id + "': 'command' must name a program");
      d.invocation = ExternalCommand{std::move(argv)};
    } else {
      MockSpec spec;
      spec.default_behavior = ParseMockBehavior(j.at("mock"));
      for (const auto& r : j.value("script", json::array())) {
        MockRule rule;
        rule.utterance_id = r.value("utterance", "*");
        rule.source = r.value("source", "*");
        rule.behavior = ParseMockBehavior(r);
        spec.rules.push_back(std::move(rule));
      }
      d.invocation = std::move(spec);
    }
    return d;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed engine descriptor: ") + e.what());
  }
}

void EngineRegistry::Add(EngineDescriptor descriptor) {
  if (Contains(descriptor.id)) throw ConfigError("duplicate engine id '" + descriptor.id + "'");
  engines_.push_back(MakeEngine(std::move(descriptor)));
}

EngineRegistry EngineRegistry::FromJson(const json& config) {
  EngineRegistry registry;
  const json* list = &config;
  if (config.is_object()) {
    if (!config.contains("engines")) throw ConfigError("engine registry needs an 'engines' list");
    list = &config.at("engines");
  }
  if (!list->is_array()) throw ConfigError("engine registry 'engines' must be a list");
  for (const auto& entry : *list) registry.Add(ParseEngineDescriptor(entry));
  return registry;
}

EngineRegistry EngineRegistry::FromFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open engine registry " + path.string());
  try {
    return FromJson(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError("engine registry " + path.string() + ": " + e.what());
  }
}

const Engine& EngineRegistry::Get(std::string_view id) const {
  for (const auto& e : engines_)
    if (e->id() == id) return *e;
  throw ConfigError("unknown engine '" + std::string(id) + "'");
}

bool EngineRegistry::Contains(std::string_view id) const {
  for (const auto& e : engines_)
    if (e->id() == id) return true;
  return false;
}

std::vector<const Engine*> EngineRegistry::OfKind(EngineKind kind) const {
  std::vector<const Engine*> out;
  for (const auto& e : engines_)
    if (e->kind() == kind) out.push_back(e.get());
  return out;
}

}  // namespace fa::engines
