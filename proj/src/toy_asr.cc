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

#include "noisemask/toy_asr.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>

#include "noisemask/error.h"

namespace noisemask {
namespace {

constexpr char kMagic[8] = {'N', 'M', 'T', 'O', 'Y', 'A', 'S', 'R'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<char>(v >> (8 * i)));
  }
  void I64(std::int64_t v) { U64(static_cast<std::uint64_t>(v)); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Str(const std::string& s) {
    U32(static_cast<std::uint32_t>(s.size()));
    bytes_ += s;
  }
  void Raw(const char* p, std::size_t n) { bytes_.append(p, n); }
  const std::string& bytes() const { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  explicit Reader(std::string bytes) : bytes_(std::move(bytes)) {}

  std::uint64_t U64() {
    Need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(Byte(pos_ + i)) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::uint32_t U32() {
    Need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(Byte(pos_ + i)) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::int64_t I64() { return static_cast<std::int64_t>(U64()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Str() {
    const std::uint32_t n = U32();
    Need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  std::string Raw(std::size_t n) {
    Need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  // Bounds a count read from the file by the bytes that remain.
  std::uint64_t Count(std::size_t min_item_bytes) {
    const std::uint64_t n = U64();
    if (n > (bytes_.size() - pos_) / std::max<std::size_t>(min_item_bytes, 1)) {
      throw Error(ErrorCode::kParseError, "toy model: implausible element count");
    }
    return n;
  }
  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  unsigned char Byte(std::size_t at) const { return static_cast<unsigned char>(bytes_[at]); }
  void Need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(ErrorCode::kParseError, "toy model: truncated file");
  }

  std::string bytes_;
  std::size_t pos_ = 0;
};

const std::string& ArgmaxCount(const std::map<std::string, std::uint64_t>& counts) {
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

std::string FallbackToken(const ToyAsrModel& model, const std::string& prev) {
  if (const auto it = model.bigram_counts.find(prev);
      it != model.bigram_counts.end() && !it->second.empty()) {
    return ArgmaxCount(it->second);
  }
  return ArgmaxCount(model.unigram_counts);
}

}  // namespace

Fingerprint ComputeFingerprint(std::span<const Sample> samples, int sample_rate_hz) {
  Fingerprint fp{};
  if (samples.empty()) return fp;
  const auto frame = static_cast<std::size_t>(
      std::max<std::int64_t>(1, MsToSamples(kFingerprintFrameMs, sample_rate_hz)));
  const auto hop = static_cast<std::size_t>(
      std::max<std::int64_t>(1, MsToSamples(kFingerprintHopMs, sample_rate_hz)));
  const std::size_t n = samples.size();
  const std::size_t num_frames = n <= frame ? 1 : 1 + (n - frame) / hop;

  std::vector<double> envelope(num_frames);
  for (std::size_t f = 0; f < num_frames; ++f) {
    const std::size_t begin = f * hop;
    const std::size_t len = std::min(frame, n - begin);
    envelope[f] = Rms(samples.subspan(begin, len));
  }

  for (std::size_t i = 0; i < kFingerprintSize; ++i) {
    if (num_frames == 1) {
      fp[i] = envelope[0];
      continue;
    }
    const double pos = static_cast<double>(i) * static_cast<double>(num_frames - 1) /
                       static_cast<double>(kFingerprintSize - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, num_frames - 1);
    const double frac = pos - static_cast<double>(lo);
    fp[i] = envelope[lo] * (1.0 - frac) + envelope[hi] * frac;
  }

  double norm = 0.0;
  for (double v : fp) norm += v * v;
  norm = std::sqrt(norm);
  if (norm == 0.0) return Fingerprint{};
  for (double& v : fp) v /= norm;
  return fp;
}

double CosineSimilarity(const Fingerprint& a, const Fingerprint& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < kFingerprintSize; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

std::uint64_t ToyAsrModel::BigramCount(const std::string& prev, const std::string& next) const {
  const auto it = bigram_counts.find(prev);
  if (it == bigram_counts.end()) return 0;
  const auto jt = it->second.find(next);
  return jt == it->second.end() ? 0 : jt->second;
}

ToyAsrModel TrainToy(std::span<const CorpusEntry> corpus, const ToyAsrOptions& options) {
  if (options.match_threshold <= 0.0 || options.match_threshold > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "match threshold must be in (0, 1]");
  }
  ToyAsrModel model;
  model.match_threshold = options.match_threshold;
  model.silence_threshold = options.silence_threshold;
  model.min_gap_ms = options.min_gap_ms;

  std::optional<std::int64_t> max_gap;
  for (const auto& entry : corpus) {
    entry.Validate();
    const int rate = entry.clip.sample_rate_hz();
    std::string prev(kSentenceStart);
    for (std::size_t i = 0; i < entry.alignment.size(); ++i) {
      const AlignedWord& w = entry.alignment[i];
      const SampleRange span = ClampMsRange(entry.clip, w.start_ms, w.end_ms);
      model.templates[w.token].push_back(
          ComputeFingerprint(entry.clip.view().subspan(span.begin, span.length()), rate));
      ++model.bigram_counts[prev][w.token];
      ++model.unigram_counts[w.token];
      prev = w.token;
      if (i > 0) {
        const std::int64_t gap = w.start_ms - entry.alignment[i - 1].end_ms;
        max_gap = std::max(max_gap.value_or(gap), gap);
      }
    }
  }
  if (max_gap) model.hole_gap_ms = *max_gap + options.hole_slack_ms;
  return model;
}

Transcript ToyTranscribe(const ToyAsrModel& model, const AudioClip& clip) {
  if (model.empty()) throw Error(ErrorCode::kEmptyModel, "toy model has no training data");
  const auto runs = DetectVoicedRuns(clip, model.silence_threshold, model.min_gap_ms);
  const std::int64_t rate = clip.sample_rate_hz();

  std::vector<std::string> words;
  std::string prev(kSentenceStart);
  auto emit = [&](const Fingerprint& fp) {
    double best_sim = -1.0;
    const std::string* best_token = nullptr;
    for (const auto& [token, fps] : model.templates) {
      for (const auto& t : fps) {
        const double sim = CosineSimilarity(fp, t);
        if (sim > best_sim) {
          best_sim = sim;
          best_token = &token;
        }
      }
    }
    std::string token = (best_token && best_sim >= model.match_threshold)
                            ? *best_token
                            : FallbackToken(model, prev);
    words.push_back(token);
    prev = std::move(token);
  };

  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (k > 0 && model.hole_gap_ms) {
      const auto gap = static_cast<std::int64_t>(runs[k].begin - runs[k - 1].end);
      if (gap * 1000 > *model.hole_gap_ms * rate) emit(Fingerprint{});
    }
    emit(ComputeFingerprint(clip.view().subspan(runs[k].begin, runs[k].length()),
                            clip.sample_rate_hz()));
  }
  return Transcript(std::move(words));
}

void SaveToyModel(const ToyAsrModel& model, const std::filesystem::path& path) {
  Writer w;
  w.Raw(kMagic, sizeof(kMagic));
  w.U32(kFormatVersion);
  w.F64(model.match_threshold);
  w.F64(model.silence_threshold);
  w.I64(model.min_gap_ms);
  w.I64(model.hole_gap_ms.value_or(-1));
  w.U64(model.templates.size());
  for (const auto& [token, fps] : model.templates) {
    w.Str(token);
    w.U64(fps.size());
    for (const auto& fp : fps) {
      for (double v : fp) w.F64(v);
    }
  }
  w.U64(model.bigram_counts.size());
  for (const auto& [prev, nexts] : model.bigram_counts) {
    w.Str(prev);
    w.U64(nexts.size());
    for (const auto& [next, count] : nexts) {
      w.Str(next);
      w.U64(count);
    }
  }
  w.U64(model.unigram_counts.size());
  for (const auto& [token, count] : model.unigram_counts) {
    w.Str(token);
    w.U64(count);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  out.write(w.bytes().data(), static_cast<std::streamsize>(w.bytes().size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

ToyAsrModel LoadToyModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  Reader r(std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()));

  if (r.Raw(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw Error(ErrorCode::kParseError, path.string() + ": not a toy model file");
  }
  if (const std::uint32_t version = r.U32(); version != kFormatVersion) {
    throw Error(ErrorCode::kParseError,
                path.string() + ": unsupported toy model version " + std::to_string(version));
  }
  ToyAsrModel model;
  model.match_threshold = r.F64();
  model.silence_threshold = r.F64();
  model.min_gap_ms = r.I64();
  if (const std::int64_t hole = r.I64(); hole >= 0) model.hole_gap_ms = hole;
  for (std::uint64_t n = r.Count(12); n > 0; --n) {
    std::string token = r.Str();
    auto& fps = model.templates[token];
    for (std::uint64_t m = r.Count(8 * kFingerprintSize); m > 0; --m) {
      Fingerprint fp;
      for (double& v : fp) v = r.F64();
      fps.push_back(fp);
    }
  }
  for (std::uint64_t n = r.Count(12); n > 0; --n) {
    std::string prev = r.Str();
    auto& nexts = model.bigram_counts[prev];
    for (std::uint64_t m = r.Count(12); m > 0; --m) {
      std::string next = r.Str();
      nexts[next] = r.U64();
    }
  }
  for (std::uint64_t n = r.Count(12); n > 0; --n) {
    std::string token = r.Str();
    model.unigram_counts[token] = r.U64();
  }
  if (!r.AtEnd()) throw Error(ErrorCode::kParseError, path.string() + ": trailing bytes");
  return model;
}

}  // namespace noisemask
