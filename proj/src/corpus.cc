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

#include "noisemask/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "noisemask/error.h"
#include "noisemask/parallel.h"
#include "noisemask/rng.h"
#include "noisemask/toy_asr.h"

namespace noisemask {
namespace {

using ordered_json = nlohmann::ordered_json;

struct ManifestRecord {
  std::string id, split, wav, transcript, alignment, source;
};

std::string FileStem(const std::string& id) {
  std::string stem = id;
  for (char& c : stem) {
    if (c == '/' || c == '\\' || c == ':' || c == ' ') c = '_';
  }
  return stem;
}

std::string RequireString(const ordered_json& record, const char* field, std::size_t line_no) {
  if (!record.contains(field) || !record[field].is_string()) {
    throw Error(ErrorCode::kManifestParseError,
                "line " + std::to_string(line_no) + ": missing string field '" + field + "'");
  }
  return record[field].get<std::string>();
}

std::vector<Sample> SynthesizeVoice(Rng& rng, int rate) {
  constexpr std::size_t kControlPoints = 12;
  constexpr double kPeak = 12000.0;
  const std::int64_t duration_ms = 150 + static_cast<std::int64_t>(rng.UniformIndex(151));
  const auto n = static_cast<std::size_t>(MsToSamples(duration_ms, rate));

  double freqs[3];
  freqs[0] = rng.Uniform(200.0, 1500.0);
  freqs[1] = freqs[0] + rng.Uniform(60.0, 400.0);
  freqs[2] = freqs[1] + rng.Uniform(60.0, 400.0);
  double phases[3];
  for (double& p : phases) p = rng.Uniform(0.0, 2.0 * std::numbers::pi);
  double levels[kControlPoints];
  // Each control point is either a loud syllable or a soft trough. The
  // troughs stay well above the segmentation threshold.
  for (double& l : levels) l = rng.Bernoulli(0.5) ? rng.Uniform(0.7, 1.0) : 0.06;

  const double ramp = static_cast<double>(MsToSamples(5, rate));
  std::vector<Sample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pos = static_cast<double>(i) / static_cast<double>(n) * (kControlPoints - 1);
    const auto k = std::min(static_cast<std::size_t>(pos), kControlPoints - 2);
    const double frac = pos - static_cast<double>(k);
    const double smooth = (1.0 - std::cos(frac * std::numbers::pi)) / 2.0;
    double env = levels[k] * (1.0 - smooth) + levels[k + 1] * smooth;
    const double edge = std::min(static_cast<double>(i) + 1.0, static_cast<double>(n - i));
    if (edge < ramp) env *= edge / ramp;
    const double t = static_cast<double>(i) / rate;
    double tone = 0.0;
    for (int f = 0; f < 3; ++f) tone += std::sin(2.0 * std::numbers::pi * freqs[f] * t + phases[f]);
    out[i] = static_cast<Sample>(std::lround(kPeak * env * tone / 3.0));
  }
  return out;
}

}  // namespace

std::vector<CorpusEntry> LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open manifest " + path.string());
  const std::filesystem::path base = path.parent_path();

  std::vector<ManifestRecord> records;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ordered_json record;
    try {
      record = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kManifestParseError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!record.is_object()) {
      throw Error(ErrorCode::kManifestParseError, "line " + std::to_string(line_no) + ": not an object");
    }
    ManifestRecord r{RequireString(record, "id", line_no),
                     RequireString(record, "split", line_no),
                     RequireString(record, "wav", line_no),
                     RequireString(record, "transcript", line_no),
                     RequireString(record, "alignment", line_no),
                     record.contains("source") ? RequireString(record, "source", line_no) : "real"};
    if (r.id.empty()) {
      throw Error(ErrorCode::kManifestParseError, "line " + std::to_string(line_no) + ": empty id");
    }
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::kManifestParseError,
                  "line " + std::to_string(line_no) + ": duplicate id '" + r.id + "'");
    }
    if (!IsValidSplit(r.split)) {
      throw Error(ErrorCode::kManifestParseError,
                  "line " + std::to_string(line_no) + ": unknown split '" + r.split + "'");
    }
    if (r.source != "real" && r.source != "synthetic") {
      throw Error(ErrorCode::kManifestParseError,
                  "line " + std::to_string(line_no) + ": unknown source '" + r.source + "'");
    }
    records.push_back(std::move(r));
  }

  std::vector<CorpusEntry> entries;
  entries.reserve(records.size());
  for (const auto& r : records) {
    try {
      CorpusEntry e;
      e.id = r.id;
      e.split = r.split;
      e.source = ParseProvenance(r.source);
      e.transcript = NormalizeText(r.transcript);
      e.clip = ReadWav(base / r.wav);
      std::ifstream ali(base / r.alignment);
      if (!ali) throw Error(ErrorCode::kIoFailure, "cannot open " + (base / r.alignment).string());
      e.alignment = ParseAlignment(ali);
      e.Validate();
      entries.push_back(std::move(e));
    } catch (const EntryError&) {
      throw;
    } catch (const std::exception& ex) {
      throw EntryError(r.id, ex.what());
    }
  }
  return entries;
}

std::filesystem::path WriteCorpus(std::span<const CorpusEntry> entries,
                                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "wav");
  std::filesystem::create_directories(dir / "ali");
  const auto manifest_path = dir / "manifest.jsonl";
  std::ofstream manifest(manifest_path, std::ios::trunc);
  if (!manifest) throw Error(ErrorCode::kIoFailure, "cannot open " + manifest_path.string());
  for (const auto& e : entries) {
    const std::string stem = FileStem(e.id);
    const std::string wav_rel = "wav/" + stem + ".wav";
    const std::string ali_rel = "ali/" + stem + ".ali";
    WriteWav(e.clip, dir / wav_rel);
    std::ofstream ali(dir / ali_rel, std::ios::trunc);
    ali << RenderAlignment(e.alignment);
    if (!ali) throw Error(ErrorCode::kIoFailure, "write failed: " + (dir / ali_rel).string());
    ordered_json record;
    record["id"] = e.id;
    record["split"] = e.split;
    record["wav"] = wav_rel;
    record["transcript"] = e.transcript.Text();
    record["alignment"] = ali_rel;
    record["source"] = std::string(ProvenanceName(e.source));
    manifest << record.dump() << '\n';
  }
  if (!manifest) throw Error(ErrorCode::kIoFailure, "write failed: " + manifest_path.string());
  return manifest_path;
}

std::vector<std::string> DefaultNamePool() {
  return {"soames",   "havisham", "smith",   "jones",    "brown",   "darcy",   "bennet",
          "weston",   "knightley", "elton",  "martin",   "crawford", "bertram", "norris",
          "rushworth", "yates",    "grant",  "willoughby", "ferrars", "palmer"};
}

std::vector<std::string> DefaultFillerWords() {
  return {"was",   "somehow", "said",  "the",    "ship",  "came",   "home",
          "late",  "again",   "quietly", "into", "garden", "before", "dinner"};
}

FixtureVoices::FixtureVoices(const std::vector<std::string>& vocabulary, std::uint64_t seed,
                             int sample_rate_hz, double max_similarity) {
  constexpr int kMaxAttempts = 2000;
  Fingerprint flat;
  flat.fill(1.0);
  std::vector<Fingerprint> accepted;
  for (const auto& token : vocabulary) {
    if (voices_.contains(token)) continue;
    Rng rng(DeriveSeed(seed, "voice:" + token));
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      std::vector<Sample> voice = SynthesizeVoice(rng, sample_rate_hz);
      const Fingerprint fp = ComputeFingerprint(voice, sample_rate_hz);
      bool distinct = CosineSimilarity(fp, flat) < max_similarity;
      for (const auto& other : accepted) {
        if (!distinct) break;
        distinct = CosineSimilarity(fp, other) < max_similarity;
      }
      if (distinct) {
        accepted.push_back(fp);
        voices_.emplace(token, std::move(voice));
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::kInvalidArgument,
                  "could not find a distinct voice for '" + token + "'; vocabulary too large");
    }
  }
}

const std::vector<Sample>& FixtureVoices::Voice(const std::string& token) const {
  const auto it = voices_.find(token);
  if (it == voices_.end()) throw Error(ErrorCode::kInvalidArgument, "no voice for '" + token + "'");
  return it->second;
}

std::vector<CorpusEntry> SynthesizeFixtureCorpus(const FixtureOptions& options) {
  if (options.name_pool.empty()) throw Error(ErrorCode::kInvalidArgument, "empty name pool");
  if (options.filler_words.empty() && options.max_fillers > 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty filler vocabulary");
  }
  if (options.min_fillers > options.max_fillers) {
    throw Error(ErrorCode::kInvalidArgument, "min_fillers > max_fillers");
  }
  std::vector<std::string> vocabulary{"mister"};
  for (const auto& list : {options.name_pool, options.filler_words}) {
    for (const auto& w : list) {
      if (!IsNormalizedToken(w)) {
        throw Error(ErrorCode::kInvalidArgument, "fixture word '" + w + "' is not normalized");
      }
      vocabulary.push_back(w);
    }
  }
  const FixtureVoices voices(vocabulary, options.seed, options.sample_rate_hz,
                             options.max_voice_similarity);

  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t r = 0; r < options.name_pool.size(); ++r) {
    total += 1.0 / std::pow(static_cast<double>(r + 1), options.zipf_exponent);
    cumulative.push_back(total);
  }

  const int width = std::max<int>(4, static_cast<int>(std::to_string(options.n_utterances).size()));
  std::vector<CorpusEntry> entries(options.n_utterances);
  ParallelFor(options.n_utterances, static_cast<int>(std::thread::hardware_concurrency()),
              [&](std::size_t u) {
    std::ostringstream id_stream;
    id_stream << "utt" << std::setw(width) << std::setfill('0') << u;
    const std::string id = id_stream.str();
    Rng rng(DeriveSeed(options.seed, id));

    std::vector<std::string> words{"mister"};
    const double pick = rng.Uniform01() * total;
    const auto name_rank = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
    words.push_back(options.name_pool[std::min(name_rank, options.name_pool.size() - 1)]);
    const std::size_t fillers =
        options.min_fillers +
        static_cast<std::size_t>(rng.UniformIndex(options.max_fillers - options.min_fillers + 1));
    for (std::size_t f = 0; f < fillers; ++f) {
      words.push_back(
          options.filler_words[static_cast<std::size_t>(rng.UniformIndex(options.filler_words.size()))]);
    }

    const int rate = options.sample_rate_hz;
    std::vector<Sample> samples(static_cast<std::size_t>(MsToSamples(options.edge_silence_ms, rate)), 0);
    std::vector<AlignedWord> aligned;
    for (std::size_t w = 0; w < words.size(); ++w) {
      if (w > 0) samples.resize(samples.size() + static_cast<std::size_t>(MsToSamples(options.gap_ms, rate)), 0);
      // Word onsets land on whole milliseconds so the alignment is exact.
      const std::int64_t start_ms = static_cast<std::int64_t>(samples.size()) * 1000 / rate;
      samples.resize(static_cast<std::size_t>(MsToSamples(start_ms, rate)), 0);
      const auto& voice = voices.Voice(words[w]);
      samples.insert(samples.end(), voice.begin(), voice.end());
      const std::int64_t end_ms =
          (static_cast<std::int64_t>(samples.size()) * 1000 + rate - 1) / rate;
      samples.resize(static_cast<std::size_t>(MsToSamples(end_ms, rate)), 0);
      aligned.push_back({words[w], start_ms, end_ms});
    }
    samples.resize(samples.size() + static_cast<std::size_t>(MsToSamples(options.edge_silence_ms, rate)), 0);

    CorpusEntry& e = entries[u];
    e.id = id;
    e.split = rng.Uniform01() < options.test_fraction ? "test" : "train";
    e.transcript = Transcript(words);
    e.alignment = WordAlignment(std::move(aligned));
    e.clip = AudioClip(std::move(samples), rate);
    e.source = Provenance::kSynthetic;
  });
  return entries;
}

std::filesystem::path GenerateFixtureCorpus(const FixtureOptions& options,
                                            const std::filesystem::path& dir) {
  const auto entries = SynthesizeFixtureCorpus(options);
  return WriteCorpus(entries, dir);
}

}  // namespace noisemask
