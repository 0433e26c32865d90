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

#include "fa/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "fa/errors.hpp"

namespace fa::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

bool SupportedDepth(int bits) { return bits == 8 || bits == 16 || bits == 24 || bits == 32; }

double FullScale(int bits) { return std::ldexp(1.0, bits - 1); }

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void Require(std::size_t n, const char* what) const {
    if (remaining() < n) throw FormatError(std::string("truncated ") + what, pos_);
  }

  std::uint32_t U32() {
    Require(4, "field");
    const std::uint32_t v = static_cast<std::uint32_t>(bytes_[pos_]) |
                            static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 8 |
                            static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 16 |
                            static_cast<std::uint32_t>(bytes_[pos_ + 3]) << 24;
    pos_ += 4;
    return v;
  }

  std::uint16_t U16() {
    Require(2, "field");
    const auto v = static_cast<std::uint16_t>(bytes_[pos_] | bytes_[pos_ + 1] << 8);
    pos_ += 2;
    return v;
  }

  std::string Tag() {
    Require(4, "chunk id");
    std::string tag(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return tag;
  }

  void Skip(std::size_t n) {
    Require(n, "chunk");
    pos_ += n;
  }

  std::span<const std::uint8_t> Take(std::size_t n) {
    Require(n, "data chunk");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct FormatChunk {
  int channels = 0;
  int sample_rate = 0;
  int bits = 0;
};

FormatChunk ParseFormat(ByteReader& r, std::uint32_t size) {
  const std::size_t start = r.offset();
  if (size < 16) throw FormatError("fmt chunk shorter than 16 bytes", start);
  r.Require(size, "fmt chunk");
  std::uint16_t format = r.U16();
  FormatChunk f;
  f.channels = r.U16();
  f.sample_rate = static_cast<int>(r.U32());
  r.U32();  // byte rate
  const std::uint16_t block_align = r.U16();
  f.bits = r.U16();
  std::size_t consumed = 16;
  if (format == kFormatExtensible) {
    if (size < 40) throw FormatError("WAVE_FORMAT_EXTENSIBLE fmt chunk too short", start);
    r.U16();  // cbSize
    r.U16();  // valid bits
    r.U32();  // channel mask
    format = r.U16();
    r.Skip(14);
    consumed = 40;
  }
  r.Skip(size - consumed);
  if (format != kFormatPcm) throw FormatError("non-PCM codec " + std::to_string(format), start);
  if (f.channels < 1) throw FormatError("zero channels", start);
  if (f.sample_rate <= 0) throw FormatError("non-positive sample rate", start);
  if (!SupportedDepth(f.bits))
    throw FormatError("unsupported bit depth " + std::to_string(f.bits), start);
  if (block_align != f.channels * f.bits / 8) throw FormatError("inconsistent block align", start);
  return f;
}

double DecodeSample(const std::uint8_t* p, int bits) {
  switch (bits) {
    case 8:
      return (static_cast<int>(p[0]) - 128) / 128.0;
    case 16:
      return static_cast<std::int16_t>(p[0] | p[1] << 8) / FullScale(16);
    case 24: {
      std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
      if (v & 0x800000) v -= 0x1000000;
      return v / FullScale(24);
    }
    default: {
      const std::uint32_t u = static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
                              static_cast<std::uint32_t>(p[2]) << 16 |
                              static_cast<std::uint32_t>(p[3]) << 24;
      return static_cast<std::int32_t>(u) / FullScale(32);
    }
  }
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

}  // namespace

void AudioClip::Validate() const {
  if (sample_rate <= 0) throw FormatError("sample rate must be positive", 0);
  if (!SupportedDepth(bit_depth)) throw FormatError("unsupported bit depth " + std::to_string(bit_depth), 0);
  if (samples.cols() < 1) throw FormatError("clip has no channels", 0);
  if (samples.size() > 0 && samples.cwiseAbs().maxCoeff() > 1.0)
    throw FormatError("amplitude outside [-1, 1]", 0);
}

bool AudioClip::operator==(const AudioClip& other) const {
  return sample_rate == other.sample_rate && bit_depth == other.bit_depth &&
         samples.rows() == other.samples.rows() && samples.cols() == other.samples.cols() &&
         samples == other.samples;
}

double Quantize(double amplitude, int bit_depth) {
  const double scale = FullScale(bit_depth);
  const double q = std::nearbyint(std::clamp(amplitude, -1.0, 1.0) * scale);
  return std::clamp(q, -scale, scale - 1.0) / scale;
}

AudioClip ReadWav(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.Tag() != "RIFF") throw FormatError("missing RIFF header", 0);
  r.U32();
  if (r.Tag() != "WAVE") throw FormatError("missing WAVE form type", 8);

  std::optional<FormatChunk> fmt;
  while (r.remaining() >= 8) {
    const std::size_t chunk_start = r.offset();
    const std::string id = r.Tag();
    const std::uint32_t size = r.U32();
    if (id == "fmt ") {
      fmt = ParseFormat(r, size);
    } else if (id == "data") {
      if (!fmt) throw FormatError("data chunk before fmt chunk", chunk_start);
      const std::size_t block = static_cast<std::size_t>(fmt->channels * fmt->bits / 8);
      if (r.remaining() < size) throw FormatError("truncated data chunk", r.offset());
      if (size % block != 0) throw FormatError("data chunk is not a whole number of frames", r.offset());
      const auto data = r.Take(size);
      const Eigen::Index frames = static_cast<Eigen::Index>(size / block);
      AudioClip clip;
      clip.sample_rate = fmt->sample_rate;
      clip.bit_depth = fmt->bits;
      clip.samples.resize(frames, fmt->channels);
      const std::size_t width = static_cast<std::size_t>(fmt->bits / 8);
      for (Eigen::Index f = 0; f < frames; ++f)
        for (int c = 0; c < fmt->channels; ++c)
          clip.samples(f, c) =
              DecodeSample(data.data() + static_cast<std::size_t>(f) * block + c * width, fmt->bits);
      return clip;
    } else {
      r.Skip(size);
    }
    if (size % 2 == 1 && r.remaining() > 0) r.Skip(1);
  }
  throw FormatError(fmt ? "missing data chunk" : "missing fmt chunk", r.offset());
}

AudioClip ReadWavFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return ReadWav(bytes);
}

std::vector<std::uint8_t> WriteWav(const AudioClip& clip) {
  if (!SupportedDepth(clip.bit_depth))
    throw FormatError("unsupported bit depth " + std::to_string(clip.bit_depth), 0);
  if (clip.sample_rate <= 0) throw FormatError("sample rate must be positive", 0);
  const auto channels = static_cast<std::uint32_t>(clip.channels());
  if (channels == 0) throw FormatError("clip has no channels", 0);
  const std::uint32_t width = static_cast<std::uint32_t>(clip.bit_depth / 8);
  const std::uint32_t data_size = static_cast<std::uint32_t>(clip.frames()) * channels * width;
  const std::uint32_t pad = data_size % 2;

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size + pad);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_size + pad);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kFormatPcm);
  PutU16(out, static_cast<std::uint16_t>(channels));
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate) * channels * width);
  PutU16(out, static_cast<std::uint16_t>(channels * width));
  PutU16(out, static_cast<std::uint16_t>(clip.bit_depth));
  PutTag(out, "data");
  PutU32(out, data_size);

  const double scale = FullScale(clip.bit_depth);
  for (Eigen::Index f = 0; f < clip.frames(); ++f) {
    for (Eigen::Index c = 0; c < clip.channels(); ++c) {
      const double q = Quantize(clip.samples(f, c), clip.bit_depth) * scale;
      if (clip.bit_depth == 8) {
        out.push_back(static_cast<std::uint8_t>(static_cast<int>(q) + 128));
        continue;
      }
      const auto v = static_cast<std::uint32_t>(static_cast<std::int32_t>(q));
      for (std::uint32_t b = 0; b < width; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
    }
  }
  if (pad) out.push_back(0);
  return out;
}

void WriteWavFile(const AudioClip& clip, const std::filesystem::path& path) {
  const auto bytes = WriteWav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("short write to " + path.string());
}

AudioClip Standardize(const AudioClip& clip) {
  if (clip.frames() == 0) return clip;

  Eigen::VectorXd mono = clip.samples.rowwise().mean().cwiseMax(-1.0).cwiseMin(1.0);

  if (clip.sample_rate != kStandardRate) {
    const auto in_frames = static_cast<std::int64_t>(mono.size());
    const std::int64_t out_frames =
        std::max<std::int64_t>(1, (in_frames * kStandardRate + clip.sample_rate / 2) / clip.sample_rate);
    const double step = static_cast<double>(clip.sample_rate) / kStandardRate;
    Eigen::VectorXd resampled(out_frames);
    for (std::int64_t k = 0; k < out_frames; ++k) {
      const double pos = static_cast<double>(k) * step;
      const auto i0 = static_cast<std::int64_t>(std::floor(pos));
      if (i0 + 1 >= in_frames) {
        resampled(k) = mono(in_frames - 1);
        continue;
      }
      const double frac = pos - static_cast<double>(i0);
      resampled(k) = (1.0 - frac) * mono(i0) + frac * mono(i0 + 1);
    }
    mono = std::move(resampled);
  }

  AudioClip out;
  out.sample_rate = kStandardRate;
  out.bit_depth = kStandardDepth;
  out.samples = mono.unaryExpr([](double a) { return Quantize(a, kStandardDepth); });
  return out;
}

}  // namespace fa::audio
