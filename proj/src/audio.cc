// Copyright 2026 The Noisemask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noisemask/audio.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "noisemask/error.h"
#include "noisemask/rng.h"

namespace noisemask {
namespace {

constexpr std::uint16_t kPcmFormat = 1;
constexpr std::uint16_t kBitsPerSample = 16;

std::uint32_t ReadU32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 |
         static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t ReadU16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::memcmp(b.data() + at, tag, 4) == 0;
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

Sample Saturate(double v) {
  const double r = std::round(v);
  if (r > std::numeric_limits<Sample>::max()) return std::numeric_limits<Sample>::max();
  if (r < std::numeric_limits<Sample>::min()) return std::numeric_limits<Sample>::min();
  return static_cast<Sample>(r);
}

void RequireSameRate(int a, int b) {
  if (a != b) {
    throw Error(ErrorCode::kRateMismatch,
                std::to_string(a) + " Hz vs " + std::to_string(b) + " Hz");
  }
}

}  // namespace

AudioClip::AudioClip(std::vector<Sample> samples, int sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (sample_rate_hz_ <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sample rate must be positive, got " + std::to_string(sample_rate_hz_));
  }
}

bool AudioClip::ContainsMs(std::int64_t ms) const {
  return ms * sample_rate_hz_ <= static_cast<std::int64_t>(samples_.size()) * 1000;
}

std::int64_t MsToSamples(std::int64_t ms, int sample_rate_hz) {
  if (ms <= 0) return 0;
  return (ms * sample_rate_hz + 500) / 1000;
}

double Rms(std::span<const Sample> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (Sample s : samples) acc += static_cast<double>(s) * s;
  return std::sqrt(acc / static_cast<double>(samples.size()));
}

AudioClip DecodeWav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !TagIs(bytes, 0, "RIFF") || !TagIs(bytes, 8, "WAVE")) {
    throw Error(ErrorCode::kMalformedWav, "missing RIFF/WAVE header");
  }
  const std::uint64_t riff_size = ReadU32(bytes, 4);
  if (riff_size < 4 || riff_size + 8 > bytes.size()) {
    throw Error(ErrorCode::kMalformedWav, "RIFF size " + std::to_string(riff_size) +
                                              " inconsistent with file size " +
                                              std::to_string(bytes.size()));
  }
  const std::size_t riff_end = static_cast<std::size_t>(riff_size + 8);

  bool have_fmt = false;
  std::uint32_t sample_rate = 0;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= riff_end) {
    const std::uint64_t chunk_size = ReadU32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_size > riff_end) {
      throw Error(ErrorCode::kMalformedWav,
                  "chunk '" + std::string(reinterpret_cast<const char*>(bytes.data() + pos), 4) +
                      "' declares " + std::to_string(chunk_size) + " bytes, only " +
                      std::to_string(riff_end - body) + " present");
    }
    if (TagIs(bytes, pos, "fmt ")) {
      if (chunk_size < 16) throw Error(ErrorCode::kMalformedWav, "fmt chunk too short");
      const std::uint16_t format = ReadU16(bytes, body);
      const std::uint16_t channels = ReadU16(bytes, body + 2);
      sample_rate = ReadU32(bytes, body + 4);
      const std::uint16_t block_align = ReadU16(bytes, body + 12);
      const std::uint16_t bits = ReadU16(bytes, body + 14);
      if (format != kPcmFormat) {
        throw Error(ErrorCode::kUnsupportedFormat, "format code " + std::to_string(format));
      }
      if (channels != 1) {
        throw Error(ErrorCode::kUnsupportedFormat, std::to_string(channels) + " channels");
      }
      if (bits != kBitsPerSample) {
        throw Error(ErrorCode::kUnsupportedFormat, std::to_string(bits) + "-bit samples");
      }
      if (block_align != 2) throw Error(ErrorCode::kMalformedWav, "block align must be 2");
      if (sample_rate == 0 || sample_rate > static_cast<std::uint32_t>(INT32_MAX)) {
        throw Error(ErrorCode::kMalformedWav, "invalid sample rate");
      }
      have_fmt = true;
    } else if (TagIs(bytes, pos, "data")) {
      if (chunk_size % 2 != 0) {
        throw Error(ErrorCode::kMalformedWav, "data chunk size not a multiple of 2");
      }
      data_offset = body;
      data_size = static_cast<std::size_t>(chunk_size);
      have_data = true;
    }
    pos = body + static_cast<std::size_t>(chunk_size) + (chunk_size & 1);
  }
  if (!have_fmt) throw Error(ErrorCode::kMalformedWav, "missing fmt chunk");
  if (!have_data) throw Error(ErrorCode::kMalformedWav, "missing data chunk");

  std::vector<Sample> samples(data_size / 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = static_cast<Sample>(ReadU16(bytes, data_offset + 2 * i));
  }
  return AudioClip(std::move(samples), static_cast<int>(sample_rate));
}

std::vector<std::uint8_t> EncodeWav(const AudioClip& clip) {
  const auto data_bytes = static_cast<std::uint32_t>(clip.size() * 2);
  const auto rate = static_cast<std::uint32_t>(clip.sample_rate_hz());
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, kPcmFormat);
  PutU16(out, 1);
  PutU32(out, rate);
  PutU32(out, rate * 2);
  PutU16(out, 2);
  PutU16(out, kBitsPerSample);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (Sample s : clip.samples()) PutU16(out, static_cast<std::uint16_t>(s));
  return out;
}

AudioClip ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read failed: " + path.string());
  try {
    return DecodeWav(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void WriteWav(const AudioClip& clip, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = EncodeWav(clip);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

std::string NoiseSource::Label() const {
  if (!label.empty()) return label;
  switch (kind) {
    case NoiseKind::kSilence: return "silence";
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
    case NoiseKind::kFile: return path.stem().string();
  }
  return "unknown";
}

NoiseSource ParseNoiseSource(const std::string& text, std::uint64_t seed) {
  std::string body = text;
  std::string label;
  if (const auto eq = body.rfind('='); eq != std::string::npos) {
    label = body.substr(eq + 1);
    body = body.substr(0, eq);
  }
  NoiseSource source;
  if (body == "silence") {
    source = NoiseSource::Silence();
  } else if (body == "white") {
    source = NoiseSource::White(seed);
  } else if (body == "pink") {
    source = NoiseSource::Pink(seed);
  } else if (body.rfind("file:", 0) == 0 && body.size() > 5) {
    source = NoiseSource::File(body.substr(5), seed);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown noise source '" + text + "'");
  }
  source.seed = seed;
  source.label = label;
  return source;
}

AudioClip GenerateNoise(const NoiseSource& source, std::int64_t duration_ms,
                        int sample_rate_hz) {
  if (duration_ms < 0) throw Error(ErrorCode::kInvalidArgument, "negative noise duration");
  return GenerateNoiseSamples(
      source, static_cast<std::size_t>(MsToSamples(duration_ms, sample_rate_hz)),
      sample_rate_hz);
}

AudioClip GenerateNoiseSamples(const NoiseSource& source, std::size_t num_samples,
                               int sample_rate_hz) {
  std::vector<Sample> out(num_samples, 0);
  Rng rng(source.seed);
  switch (source.kind) {
    case NoiseKind::kSilence:
      break;
    case NoiseKind::kWhite:
      for (Sample& s : out) {
        s = static_cast<Sample>(static_cast<std::int64_t>(rng.UniformIndex(16385)) - 8192);
      }
      break;
    case NoiseKind::kPink: {
      // Paul Kellet's economy filter over uniform white noise.
      double b0 = 0, b1 = 0, b2 = 0;
      for (Sample& s : out) {
        const double white = rng.Uniform(-1.0, 1.0);
        b0 = 0.99765 * b0 + white * 0.0990460;
        b1 = 0.96300 * b1 + white * 0.2965164;
        b2 = 0.57000 * b2 + white * 1.0526913;
        s = Saturate((b0 + b1 + b2 + white * 0.1848) * 2500.0);
      }
      break;
    }
    case NoiseKind::kFile: {
      const AudioClip file = ReadWav(source.path);
      RequireSameRate(file.sample_rate_hz(), sample_rate_hz);
      if (num_samples == 0) break;
      if (file.empty()) {
        throw Error(ErrorCode::kMalformedWav, "noise file has no samples: " + source.path.string());
      }
      const std::size_t len = file.size();
      const std::size_t offset = static_cast<std::size_t>(rng.UniformIndex(len));
      for (std::size_t i = 0; i < num_samples; ++i) {
        const std::size_t at = offset + i;
        if (source.loop == LoopPolicy::kLoop) {
          out[i] = file.samples()[at % len];
        } else {
          out[i] = at < len ? file.samples()[at] : 0;
        }
      }
      break;
    }
  }
  return AudioClip(std::move(out), sample_rate_hz);
}

SampleRange ClampMsRange(const AudioClip& clip, std::int64_t start_ms, std::int64_t end_ms) {
  const auto len = static_cast<std::int64_t>(clip.size());
  const std::int64_t b = std::min(MsToSamples(start_ms, clip.sample_rate_hz()), len);
  const std::int64_t e = std::min(MsToSamples(end_ms, clip.sample_rate_hz()), len);
  if (b > e) {
    throw Error(ErrorCode::kInvalidArgument, "span start " + std::to_string(start_ms) +
                                                 " ms after end " + std::to_string(end_ms) + " ms");
  }
  return {static_cast<std::size_t>(b), static_cast<std::size_t>(e)};
}

AudioClip ReplaceSpan(const AudioClip& clip, std::int64_t start_ms, std::int64_t end_ms,
                      const AudioClip& noise) {
  RequireSameRate(clip.sample_rate_hz(), noise.sample_rate_hz());
  return ReplaceSamples(clip, ClampMsRange(clip, start_ms, end_ms), noise);
}

AudioClip ReplaceSamples(const AudioClip& clip, SampleRange range, const AudioClip& noise) {
  RequireSameRate(clip.sample_rate_hz(), noise.sample_rate_hz());
  if (range.begin > range.end || range.end > clip.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "sample range outside clip");
  }
  const auto& src = clip.samples();
  std::vector<Sample> out;
  out.reserve(src.size() - range.length() + noise.size());
  out.insert(out.end(), src.begin(), src.begin() + static_cast<std::ptrdiff_t>(range.begin));
  out.insert(out.end(), noise.samples().begin(), noise.samples().end());
  out.insert(out.end(), src.begin() + static_cast<std::ptrdiff_t>(range.end), src.end());
  return AudioClip(std::move(out), clip.sample_rate_hz());
}

AudioClip SilenceSamples(const AudioClip& clip, SampleRange range) {
  if (range.begin > range.end || range.end > clip.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "sample range outside clip");
  }
  std::vector<Sample> out = clip.samples();
  std::fill(out.begin() + static_cast<std::ptrdiff_t>(range.begin),
            out.begin() + static_cast<std::ptrdiff_t>(range.end), Sample{0});
  return AudioClip(std::move(out), clip.sample_rate_hz());
}

std::vector<Sample> FitToLength(std::span<const Sample> noise, std::size_t length) {
  std::vector<Sample> out(length, 0);
  if (noise.empty()) return out;
  for (std::size_t i = 0; i < length; ++i) out[i] = noise[i % noise.size()];
  return out;
}

double SnrGain(std::span<const Sample> clean, std::span<const Sample> noise, double snr_db) {
  const double rms_clean = Rms(clean);
  const double rms_noise = Rms(noise);
  if (rms_clean == 0.0) throw Error(ErrorCode::kSilentInput, "clean signal has zero RMS");
  if (rms_noise == 0.0) throw Error(ErrorCode::kSilentInput, "noise has zero RMS");
  return (rms_clean / rms_noise) * std::pow(10.0, -snr_db / 20.0);
}

AudioClip MixAtSnr(const AudioClip& clean, const AudioClip& noise, double snr_db) {
  RequireSameRate(clean.sample_rate_hz(), noise.sample_rate_hz());
  const std::vector<Sample> fitted = FitToLength(noise.view(), clean.size());
  const double gain = SnrGain(clean.view(), fitted, snr_db);
  std::vector<Sample> out(clean.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Saturate(clean.samples()[i] + gain * fitted[i]);
  }
  return AudioClip(std::move(out), clean.sample_rate_hz());
}

}  // namespace noisemask
