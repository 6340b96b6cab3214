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

#ifndef NOISEMASK_ALIGNMENT_H_
#define NOISEMASK_ALIGNMENT_H_

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "noisemask/audio.h"

namespace noisemask {

// Reserved placeholder for a masked word in reference transcripts. It can
// never be produced by NormalizeText.
inline constexpr std::string_view kWildcard = "<*>";

// Matches [a-z'][a-z'-]*.
bool IsNormalizedToken(std::string_view token);

// Ordered normalized tokens. The wildcard marker is the only other token a
// Transcript may hold.
class Transcript {
 public:
  Transcript() = default;
  // Tokens must already be normalized; throws kInvariantViolation otherwise.
  explicit Transcript(std::vector<std::string> words);

  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::string& operator[](std::size_t i) const { return words_[i]; }

  // Space-joined words.
  std::string Text() const;

  // Copy with the word at `index` replaced by kWildcard.
  Transcript WithWildcard(std::size_t index) const;
  // Copy with the listed (sorted, distinct) indices removed.
  Transcript WithoutIndices(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<std::string> words_;
};

// Lowercases, strips characters outside [a-z'-], trims leading hyphens and
// drops tokens that end up empty.
Transcript NormalizeText(std::string_view text);

struct AlignedWord {
  std::string token;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  friend bool operator==(const AlignedWord&, const AlignedWord&) = default;
};

class WordAlignment {
 public:
  WordAlignment() = default;
  // Enforces start < end, start >= 0, sorted and non-overlapping entries.
  explicit WordAlignment(std::vector<AlignedWord> entries);

  const std::vector<AlignedWord>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const AlignedWord& operator[](std::size_t i) const { return entries_[i]; }

  WordAlignment WithoutIndices(const std::vector<std::size_t>& indices) const;

  friend bool operator==(const WordAlignment&, const WordAlignment&) = default;

 private:
  std::vector<AlignedWord> entries_;
};

// Throws kInvariantViolation if the token sequence differs from the
// transcript or the last word ends after the clip.
void ValidateAlignment(const WordAlignment& alignment, const Transcript& transcript,
                       const AudioClip& clip);

// One "token\tstart_ms\tend_ms" per non-empty line.
WordAlignment ParseAlignment(std::istream& in);
WordAlignment ParseAlignment(std::string_view text);
std::string RenderAlignment(const WordAlignment& alignment);

// Splits the clip into non-silent runs (|sample| > silence_threshold),
// merging runs separated by fewer than min_gap_ms of silence.
std::vector<SampleRange> DetectVoicedRuns(const AudioClip& clip, double silence_threshold,
                                          std::int64_t min_gap_ms);

// DetectVoicedRuns paired in order with expected_words. Span starts round
// down and ends round up to whole milliseconds. Throws
// kSegmentCountMismatch when the run count differs from the word count.
WordAlignment EnergySegment(const AudioClip& clip, const Transcript& expected_words,
                            double silence_threshold, std::int64_t min_gap_ms);

}  // namespace noisemask

#endif  // NOISEMASK_ALIGNMENT_H_
