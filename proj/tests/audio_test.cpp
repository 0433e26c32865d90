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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

#include "doctest.h"
#include "fa/audio.hpp"
#include "fa/errors.hpp"
#include "json.hpp"

using namespace fa::audio;
namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> Bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> Pcm8Mono(const std::vector<std::uint8_t>& data) {
  AudioClip c;
  c.sample_rate = 16000;
  c.bit_depth = 8;
  c.samples.resize(0, 1);
  auto bytes = WriteWav(c);  // canonical header for an empty clip
  const auto size = static_cast<std::uint32_t>(data.size());
  auto put32 = [&](std::size_t at, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) bytes[at + static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(v >> (8 * k));
  };
  put32(4, 36 + size);
  put32(40, size);
  bytes.insert(bytes.end(), data.begin(), data.end());
  return bytes;
}

}  // namespace

TEST_CASE("read_wav unsigned 8-bit midpoint convention") {
  const auto clip = ReadWav(Pcm8Mono({0x80, 0xFF, 0x00, 0x80}));
  CHECK(clip.sample_rate == 16000);
  CHECK(clip.bit_depth == 8);
  REQUIRE(clip.frames() == 4);
  CHECK(clip.samples(0, 0) == 0.0);
  CHECK(clip.samples(1, 0) == 127.0 / 128.0);
  CHECK(clip.samples(2, 0) == -1.0);
  CHECK(clip.samples(3, 0) == 0.0);
}

TEST_CASE("write_wav trivial cases") {
  AudioClip empty;
  empty.sample_rate = 16000;
  empty.bit_depth = 8;
  const auto bytes = WriteWav(empty);
  CHECK(bytes.size() == 44);
  CHECK(ReadWav(bytes).frames() == 0);

  AudioClip one = empty;
  one.samples = Eigen::MatrixXd::Zero(1, 1);
  const auto b1 = WriteWav(one);
  REQUIRE(b1.size() == 46);  // one data byte plus the pad byte
  CHECK(b1[44] == 0x80);
  CHECK(ReadWav(b1) == one);
}

TEST_CASE("fixtures written by an independent tool decode and re-encode identically") {
  std::ifstream meta_in(std::string(FA_TEST_DATA_DIR) + "/wav_fixtures.json");
  const auto meta = nlohmann::json::parse(meta_in);
  for (const auto& m : meta) {
    const fs::path path = fs::path(FA_TEST_DATA_DIR) / m.at("file").get<std::string>();
    INFO(path.string());
    const auto bytes = Bytes(path);
    const AudioClip clip = ReadWav(bytes);
    CHECK(clip.sample_rate == m.at("sample_rate").get<int>());
    CHECK(clip.bit_depth == m.at("bit_depth").get<int>());
    CHECK(clip.channels() == m.at("channels").get<int>());
    const auto& samples = m.at("samples");
    REQUIRE(clip.frames() == static_cast<Eigen::Index>(samples.size()));
    for (Eigen::Index f = 0; f < clip.frames(); ++f)
      for (Eigen::Index ch = 0; ch < clip.channels(); ++ch)
        CHECK(clip.samples(f, ch) == samples[static_cast<std::size_t>(f)][static_cast<std::size_t>(ch)].get<double>());
    CHECK(WriteWav(clip) == bytes);
    CHECK(ReadWavFile(path) == clip);
  }
}

TEST_CASE("malformed WAV input reports an offset") {
  const auto good = Pcm8Mono({1, 2, 3, 4});
  CHECK_THROWS_AS(ReadWav(std::span<const std::uint8_t>(good.data(), 10)), fa::FormatError);
  auto bad_tag = good;
  bad_tag[0] = 'X';
  try {
    ReadWav(bad_tag);
    FAIL("expected FormatError");
  } catch (const fa::FormatError& e) {
    CHECK(e.offset() == 0);
  }
  auto bad_format = good;
  bad_format[20] = 3;  // IEEE float
  CHECK_THROWS_AS(ReadWav(bad_format), fa::FormatError);
  auto truncated = good;
  truncated.resize(46);
  CHECK_THROWS_AS(ReadWav(truncated), fa::FormatError);
}

TEST_CASE("standardize") {
  AudioClip std_clip;
  std_clip.sample_rate = 16000;
  std_clip.bit_depth = 8;
  std_clip.samples.resize(5, 1);
  std_clip.samples << 0.0, 0.5, -0.25, 127.0 / 128.0, -1.0;
  CHECK(Standardize(std_clip) == std_clip);

  AudioClip constant;
  constant.sample_rate = 32000;
  constant.bit_depth = 16;
  constant.samples = Eigen::MatrixXd::Constant(1000, 1, 0.25);
  const auto half = Standardize(constant);
  CHECK(std::abs(half.frames() - 500) <= 1);
  CHECK((half.samples.array() == 0.25).all());

  AudioClip stereo;
  stereo.sample_rate = 16000;
  stereo.bit_depth = 16;
  stereo.samples.resize(2, 2);
  stereo.samples << 0.5, -0.5, 1.0, 0.5;
  const auto mono = Standardize(stereo);
  CHECK(mono.channels() == 1);
  CHECK(mono.samples(0, 0) == 0.0);
  CHECK(mono.samples(1, 0) == 0.75);
}

TEST_CASE("quantize rounds to the grid and clamps") {
  CHECK(Quantize(0.0, 8) == 0.0);
  CHECK(Quantize(1.0, 8) == 127.0 / 128.0);
  CHECK(Quantize(-1.5, 8) == -1.0);
  CHECK(Quantize(0.3, 16) == std::nearbyint(0.3 * 32768.0) / 32768.0);
}

TEST_CASE("write/read files and invalid clips") {
  const fs::path dir = fs::temp_directory_path() / "fa-audio-test";
  fs::create_directories(dir);
  AudioClip c;
  c.sample_rate = 8000;
  c.bit_depth = 24;
  c.samples.resize(3, 2);
  c.samples << 0.5, -0.5, 0.25, 0.0, -1.0, 0.125;
  WriteWavFile(c, dir / "x.wav");
  CHECK(ReadWavFile(dir / "x.wav") == c);
  CHECK_THROWS_AS(ReadWavFile(dir / "missing.wav"), fa::IoError);
  AudioClip bad = c;
  bad.bit_depth = 12;
  CHECK_THROWS(WriteWav(bad));
  fs::remove_all(dir);
}
