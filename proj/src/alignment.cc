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

#include "noisemask/alignment.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "noisemask/error.h"

namespace noisemask {
namespace {

bool IsTokenChar(char c) { return (c >= 'a' && c <= 'z') || c == '\'' || c == '-'; }

std::int64_t ParseMs(std::string_view field, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) +
                                            ": not an integer time '" + std::string(field) + "'");
  }
  return value;
}

template <typename T>
std::vector<T> EraseIndices(const std::vector<T>& in, const std::vector<std::size_t>& indices) {
  std::vector<T> out;
  out.reserve(in.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (next < indices.size() && indices[next] == i) {
      ++next;
      continue;
    }
    out.push_back(in[i]);
  }
  if (next != indices.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "removal indices must be sorted and in range");
  }
  return out;
}

}  // namespace

bool IsNormalizedToken(std::string_view token) {
  if (token.empty() || token.front() == '-') return false;
  return std::all_of(token.begin(), token.end(), IsTokenChar);
}

Transcript::Transcript(std::vector<std::string> words) : words_(std::move(words)) {
  for (const auto& w : words_) {
    if (w != kWildcard && !IsNormalizedToken(w)) {
      throw Error(ErrorCode::kInvariantViolation, "token '" + w + "' is not normalized");
    }
  }
}

std::string Transcript::Text() const {
  std::string out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i) out += ' ';
    out += words_[i];
  }
  return out;
}

Transcript Transcript::WithWildcard(std::size_t index) const {
  if (index >= words_.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "wildcard index " + std::to_string(index));
  }
  std::vector<std::string> words = words_;
  words[index] = std::string(kWildcard);
  return Transcript(std::move(words));
}

Transcript Transcript::WithoutIndices(const std::vector<std::size_t>& indices) const {
  return Transcript(EraseIndices(words_, indices));
}

Transcript NormalizeText(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    const auto first = current.find_first_not_of('-');
    if (first != std::string::npos) words.push_back(current.substr(first));
    current.clear();
  };
  for (char raw : text) {
    if (raw == ' ' || raw == '\t' || raw == '\n' || raw == '\r' || raw == '\f' || raw == '\v') {
      flush();
      continue;
    }
    const char c = (raw >= 'A' && raw <= 'Z') ? static_cast<char>(raw - 'A' + 'a') : raw;
    if (IsTokenChar(c)) current += c;
  }
  flush();
  return Transcript(std::move(words));
}

WordAlignment::WordAlignment(std::vector<AlignedWord> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.start_ms < 0 || e.start_ms >= e.end_ms) {
      throw Error(ErrorCode::kInvariantViolation,
                  "entry " + std::to_string(i) + " ('" + e.token + "') has start " +
                      std::to_string(e.start_ms) + " >= end " + std::to_string(e.end_ms));
    }
    if (i > 0 && entries_[i - 1].end_ms > e.start_ms) {
      throw Error(ErrorCode::kInvariantViolation,
                  "entry " + std::to_string(i) + " ('" + e.token + "') overlaps its predecessor");
    }
  }
}

WordAlignment WordAlignment::WithoutIndices(const std::vector<std::size_t>& indices) const {
  return WordAlignment(EraseIndices(entries_, indices));
}

void ValidateAlignment(const WordAlignment& alignment, const Transcript& transcript,
                       const AudioClip& clip) {
  if (alignment.size() != transcript.size()) {
    throw Error(ErrorCode::kInvariantViolation,
                "alignment has " + std::to_string(alignment.size()) + " words, transcript has " +
                    std::to_string(transcript.size()));
  }
  for (std::size_t i = 0; i < alignment.size(); ++i) {
    if (alignment[i].token != transcript[i]) {
      throw Error(ErrorCode::kInvariantViolation, "word " + std::to_string(i) + ": alignment '" +
                                                      alignment[i].token + "' vs transcript '" +
                                                      transcript[i] + "'");
    }
  }
  if (!alignment.empty() && !clip.ContainsMs(alignment.entries().back().end_ms)) {
    throw Error(ErrorCode::kInvariantViolation,
                "alignment ends at " + std::to_string(alignment.entries().back().end_ms) +
                    " ms, beyond clip duration");
  }
}

WordAlignment ParseAlignment(std::istream& in) {
  std::vector<AlignedWord> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const auto tab = rest.find('\t');
      fields.push_back(rest.substr(0, tab));
      if (tab == std::string_view::npos) break;
      rest.remove_prefix(tab + 1);
    }
    if (fields.size() != 3) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 3 fields, got " +
                                              std::to_string(fields.size()));
    }
    if (!IsNormalizedToken(fields[0])) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": bad token '" + std::string(fields[0]) + "'");
    }
    entries.push_back({std::string(fields[0]), ParseMs(fields[1], line_no), ParseMs(fields[2], line_no)});
  }
  return WordAlignment(std::move(entries));
}

WordAlignment ParseAlignment(std::string_view text) {
  std::istringstream in{std::string(text)};
  return ParseAlignment(in);
}

std::string RenderAlignment(const WordAlignment& alignment) {
  std::string out;
  for (const auto& e : alignment.entries()) {
    out += e.token + '\t' + std::to_string(e.start_ms) + '\t' + std::to_string(e.end_ms) + '\n';
  }
  return out;
}

std::vector<SampleRange> DetectVoicedRuns(const AudioClip& clip, double silence_threshold,
                                          std::int64_t min_gap_ms) {
  const auto& s = clip.samples();
  const auto min_gap = static_cast<std::size_t>(MsToSamples(min_gap_ms, clip.sample_rate_hz()));
  std::vector<SampleRange> runs;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::abs(static_cast<int>(s[i])) <= silence_threshold) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && std::abs(static_cast<int>(s[j])) > silence_threshold) ++j;
    if (!runs.empty() && i - runs.back().end < min_gap) {
      runs.back().end = j;
    } else {
      runs.push_back({i, j});
    }
    i = j;
  }
  return runs;
}

WordAlignment EnergySegment(const AudioClip& clip, const Transcript& expected_words,
                            double silence_threshold, std::int64_t min_gap_ms) {
  const auto runs = DetectVoicedRuns(clip, silence_threshold, min_gap_ms);
  if (runs.size() != expected_words.size()) {
    throw Error(ErrorCode::kSegmentCountMismatch,
                "detected " + std::to_string(runs.size()) + " segments for " +
                    std::to_string(expected_words.size()) + " words");
  }
  const std::int64_t rate = clip.sample_rate_hz();
  std::vector<AlignedWord> entries;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto b = static_cast<std::int64_t>(runs[k].begin);
    const auto e = static_cast<std::int64_t>(runs[k].end);
    std::int64_t start_ms = b * 1000 / rate;
    std::int64_t end_ms = (e * 1000 + rate - 1) / rate;
    if (!entries.empty()) start_ms = std::max(start_ms, entries.back().end_ms);
    const std::int64_t clip_ms = static_cast<std::int64_t>(clip.size()) * 1000 / rate;
    end_ms = std::max(std::min(end_ms, clip_ms), start_ms + 1);
    entries.push_back({expected_words[k], start_ms, end_ms});
  }
  return WordAlignment(std::move(entries));
}

}  // namespace noisemask
