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

// Corpus manifests and the synthetic fixture generator.
//
// A manifest is JSON Lines, one entry per line:
//   {"id": "...", "split": "train", "wav": "wav/x.wav",
//    "transcript": "mister smith ...", "alignment": "ali/x.ali",
//    "source": "synthetic"}
// Relative paths resolve against the manifest's directory.

#ifndef NOISEMASK_CORPUS_H_
#define NOISEMASK_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "noisemask/corpus_entry.h"

namespace noisemask {

// Every entry is fully validated; the first failure throws, in file order.
// Structural problems (bad JSON, missing fields, duplicate ids, unknown
// split) raise kManifestParseError; file problems raise EntryError naming
// the entry.
std::vector<CorpusEntry> LoadManifest(const std::filesystem::path& path);

// Writes wav/<id>.wav, ali/<id>.ali and manifest.jsonl under `dir`.
// Returns the manifest path.
std::filesystem::path WriteCorpus(std::span<const CorpusEntry> entries,
                                  const std::filesystem::path& dir);

std::vector<std::string> DefaultNamePool();
std::vector<std::string> DefaultFillerWords();

struct FixtureOptions {
  std::size_t n_utterances = 200;
  std::vector<std::string> name_pool = DefaultNamePool();
  std::vector<std::string> filler_words = DefaultFillerWords();
  std::uint64_t seed = 0;
  // Name rank r is drawn with weight 1 / (r + 1)^zipf_exponent.
  double zipf_exponent = 1.0;
  double test_fraction = 0.0;
  int sample_rate_hz = 16000;
  std::int64_t gap_ms = 200;
  std::int64_t edge_silence_ms = 100;
  std::size_t min_fillers = 2;
  std::size_t max_fillers = 4;
  // Word voices are redrawn until every pair is below this similarity.
  double max_voice_similarity = 0.85;
};

// Each token gets one seeded multi-tone burst with its own frequency set and
// amplitude contour.
class FixtureVoices {
 public:
  FixtureVoices(const std::vector<std::string>& vocabulary, std::uint64_t seed, int sample_rate_hz,
                double max_similarity);

  const std::vector<Sample>& Voice(const std::string& token) const;
  const std::map<std::string, std::vector<Sample>>& all() const { return voices_; }

 private:
  std::map<std::string, std::vector<Sample>> voices_;
};

// In-memory generation; utterances "mister <name> <filler...>".
std::vector<CorpusEntry> SynthesizeFixtureCorpus(const FixtureOptions& options);

// SynthesizeFixtureCorpus + WriteCorpus.
std::filesystem::path GenerateFixtureCorpus(const FixtureOptions& options,
                                            const std::filesystem::path& dir);

}  // namespace noisemask

#endif  // NOISEMASK_CORPUS_H_
