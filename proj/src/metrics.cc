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

#include "noisemask/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "noisemask/error.h"

namespace noisemask {
namespace {

std::size_t WildcardIndex(const Transcript& reference) {
  std::optional<std::size_t> index;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (reference[i] != kWildcard) continue;
    if (index) throw Error(ErrorCode::kMultipleWildcards, "reference: " + reference.Text());
    index = i;
  }
  if (!index) throw Error(ErrorCode::kNoWildcard, "reference: " + reference.Text());
  return *index;
}

std::optional<std::string> AlignWildcard(const Transcript& ref, const Transcript& hyp,
                                         std::size_t wildcard) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  auto same = [&](std::size_t i, std::size_t j) { return i == wildcard || ref[i] == hyp[j]; };

  // suffix[i][j]: cost of aligning ref[i..] with hyp[j..]. Computing it over
  // suffixes lets the trace apply the tie-break from the left.
  std::vector<std::vector<std::size_t>> suffix(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = n + 1; i-- > 0;) {
    for (std::size_t j = m + 1; j-- > 0;) {
      if (i == n) {
        suffix[i][j] = m - j;
      } else if (j == m) {
        suffix[i][j] = n - i;
      } else {
        suffix[i][j] = std::min({suffix[i + 1][j + 1] + (same(i, j) ? 0 : 1), suffix[i + 1][j] + 1,
                                 suffix[i][j + 1] + 1});
      }
    }
  }

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n) {
    const std::size_t here = suffix[i][j];
    if (j < m && suffix[i + 1][j + 1] + (same(i, j) ? 0 : 1) == here) {
      if (i == wildcard) return hyp[j];
      ++i;
      ++j;
    } else if (suffix[i + 1][j] + 1 == here) {
      if (i == wildcard) return std::nullopt;
      ++i;
    } else {
      ++j;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> ExtractPrediction(const Transcript& reference,
                                             const Transcript& hypothesis, ExtractionMode mode) {
  const std::size_t wildcard = WildcardIndex(reference);
  if (mode == ExtractionMode::kWildcardAlignment) {
    return AlignWildcard(reference, hypothesis, wildcard);
  }
  if (wildcard == 0) return std::nullopt;
  const auto& words = hypothesis.words();
  const auto it = std::find(words.begin(), words.end(), reference[wildcard - 1]);
  if (it == words.end() || it + 1 == words.end()) return std::nullopt;
  return *(it + 1);
}

ExtractionRecord Score(const MaskedQuery& query, const Transcript& hypothesis,
                       const NameLexicon& lexicon, ExtractionMode mode) {
  ExtractionRecord r;
  r.utterance_id = query.utterance_id;
  r.target_index = query.target_index;
  r.noise_kind = query.mask_label;
  r.silence_noise = query.silence_noise;
  r.setting = query.setting;
  r.true_word = query.true_word;
  r.hypothesis = hypothesis.Text();
  r.predicted = ExtractPrediction(query.reference, hypothesis, mode);
  if (r.predicted) {
    r.is_true_hit = *r.predicted == query.true_word;
    r.is_any_hit = lexicon.all_names.contains(*r.predicted);
    r.is_extrapolated = r.is_any_hit && !lexicon.after_primary.contains(*r.predicted);
  }
  return r;
}

MetricsReport Aggregate(std::span<const ExtractionRecord> records) {
  struct Acc {
    bool silence = false;
    std::size_t n = 0, true_hits = 0, any_hits = 0;
    std::set<std::string> unique, extrapolated;
  };
  std::map<std::pair<std::string, std::string>, Acc> groups;
  for (const auto& r : records) {
    Acc& acc = groups[{r.setting, r.noise_kind}];
    acc.silence = r.silence_noise;
    ++acc.n;
    acc.true_hits += r.is_true_hit;
    acc.any_hits += r.is_any_hit;
    if (r.predicted && r.is_any_hit) acc.unique.insert(*r.predicted);
    if (r.predicted && r.is_extrapolated) acc.extrapolated.insert(*r.predicted);
  }

  MetricsReport report;
  std::map<std::string, OthersRow> others;
  for (const auto& [key, acc] : groups) {
    MetricsRow row;
    row.setting = key.first;
    row.noise_kind = key.second;
    row.silence_noise = acc.silence;
    row.n = acc.n;
    row.true_pct = 100.0 * static_cast<double>(acc.true_hits) / static_cast<double>(acc.n);
    row.any_pct = 100.0 * static_cast<double>(acc.any_hits) / static_cast<double>(acc.n);
    row.unique_count = acc.unique.size();
    row.extrapolated_count = acc.extrapolated.size();
    report.rows.push_back(row);
    if (!row.silence_noise) {
      OthersRow& o = others[row.setting];
      o.setting = row.setting;
      ++o.noise_count;
      o.true_pct += row.true_pct;
      o.any_pct += row.any_pct;
    }
  }
  for (auto& [setting, o] : others) {
    o.true_pct /= static_cast<double>(o.noise_count);
    o.any_pct /= static_cast<double>(o.noise_count);
    report.others.push_back(o);
  }
  return report;
}

double RoundPct(double pct) { return std::round(pct * 10.0) / 10.0; }

std::size_t EditDistance(std::span<const std::string> reference,
                         std::span<const std::string> hypothesis) {
  std::vector<std::size_t> prev(hypothesis.size() + 1);
  std::vector<std::size_t> cur(hypothesis.size() + 1);
  for (std::size_t j = 0; j <= hypothesis.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= reference.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= hypothesis.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[hypothesis.size()];
}

double Wer(const Transcript& reference, const Transcript& hypothesis) {
  if (reference.empty()) throw Error(ErrorCode::kEmptyReference, "WER needs a non-empty reference");
  return static_cast<double>(EditDistance(reference.words(), hypothesis.words())) /
         static_cast<double>(reference.size());
}

}  // namespace noisemask
