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

#ifndef NOISEMASK_METRICS_H_
#define NOISEMASK_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noisemask/alignment.h"
#include "noisemask/masking.h"
#include "noisemask/targeting.h"

namespace noisemask {

enum class ExtractionMode {
  // Minimum edit distance alignment where the wildcard matches anything.
  kWildcardAlignment,
  // The hypothesis token right after the first occurrence of the word that
  // precedes the wildcard in the reference.
  kAfterKeyword,
};

// Hypothesis token aligned to the reference's single wildcard, or nullopt
// if the wildcard is deleted. Unit-cost edits; among optimal alignments the
// one whose edit sequence, read left to right, prefers match, then
// substitution, then deletion, then insertion at the first difference.
// Throws kNoWildcard / kMultipleWildcards.
std::optional<std::string> ExtractPrediction(const Transcript& reference,
                                             const Transcript& hypothesis,
                                             ExtractionMode mode = ExtractionMode::kWildcardAlignment);

struct ExtractionRecord {
  std::string utterance_id;
  std::size_t target_index = 0;
  std::string noise_kind;  // mask label
  bool silence_noise = false;
  std::string setting;
  std::string true_word;
  std::string hypothesis;
  std::optional<std::string> predicted;
  bool is_true_hit = false;
  bool is_any_hit = false;
  bool is_extrapolated = false;

  friend bool operator==(const ExtractionRecord&, const ExtractionRecord&) = default;
};

ExtractionRecord Score(const MaskedQuery& query, const Transcript& hypothesis,
                       const NameLexicon& lexicon,
                       ExtractionMode mode = ExtractionMode::kWildcardAlignment);

struct MetricsRow {
  std::string setting;
  std::string noise_kind;
  bool silence_noise = false;
  std::size_t n = 0;
  double true_pct = 0.0;
  double any_pct = 0.0;
  std::size_t unique_count = 0;
  std::size_t extrapolated_count = 0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

// Unweighted mean over a setting's non-silence rows.
struct OthersRow {
  std::string setting;
  std::size_t noise_count = 0;
  double true_pct = 0.0;
  double any_pct = 0.0;

  friend bool operator==(const OthersRow&, const OthersRow&) = default;
};

struct MetricsReport {
  // Sorted by (setting, noise_kind).
  std::vector<MetricsRow> rows;
  // One per setting with at least one non-silence row, sorted by setting.
  std::vector<OthersRow> others;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport Aggregate(std::span<const ExtractionRecord> records);

// Rounds to one decimal for reporting.
double RoundPct(double pct);

// Word-level Levenshtein distance.
std::size_t EditDistance(std::span<const std::string> reference,
                         std::span<const std::string> hypothesis);

// EditDistance / len(reference). Throws kEmptyReference.
double Wer(const Transcript& reference, const Transcript& hypothesis);

}  // namespace noisemask

#endif  // NOISEMASK_METRICS_H_
