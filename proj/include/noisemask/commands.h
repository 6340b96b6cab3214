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

// End-to-end workflows behind the `noisemask` subcommands. Each one is a
// plain function so it can be driven in-process by tests.

#ifndef NOISEMASK_COMMANDS_H_
#define NOISEMASK_COMMANDS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "noisemask/augment.h"
#include "noisemask/corpus.h"
#include "noisemask/masking.h"
#include "noisemask/metrics.h"
#include "noisemask/model_adapter.h"
#include "noisemask/targeting.h"

namespace noisemask {

// A failure tagged with the pipeline stage it happened in.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct RuleFiles {
  std::optional<std::filesystem::path> keywords;  // default: mister, miss, missus
  std::optional<std::filesystem::path> stoplist;  // default: empty
  std::string primary_keyword = "mister";

  TargetRule Load() const;
};

struct AuditConfig {
  std::filesystem::path manifest;
  std::string endpoint;
  AdapterLimits limits;
  RuleFiles rule;
  // Noise seeds are re-derived from `seed` and each spec's label.
  std::vector<MaskSpec> mask_specs;
  // Splits to audit; empty audits every split.
  std::vector<std::string> settings;
  std::filesystem::path out_dir;
  int jobs = 1;
  std::uint64_t seed = 0;
  bool dump_masked = false;
  ExtractionMode extraction = ExtractionMode::kWildcardAlignment;
};

struct AuditResult {
  MetricsReport report;
  std::vector<ExtractionRecord> records;
  std::vector<std::string> warnings;
};

// load -> select -> lexicon -> mask -> transcribe -> score -> aggregate,
// then report.json, report.csv and records.jsonl under out_dir.
AuditResult CmdAudit(const AuditConfig& config);

struct AugmentCommandConfig {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  RuleFiles rule;
  bool name_silencing = false;
  std::optional<std::size_t> word_dropout_k;
  bool mtr = false;
  AugmentConfig mtr_config;
  std::uint64_t seed = 0;
};

// Applies name silencing, then word dropout, then MTR, and writes the new
// corpus under out_dir. Returns the new manifest path.
std::filesystem::path CmdAugment(const AugmentCommandConfig& config);

struct LexiconCommandConfig {
  // Exactly one of these: a manifest (train splits are used) or a plain
  // text file with one transcript per line.
  std::optional<std::filesystem::path> manifest;
  std::optional<std::filesystem::path> transcripts;
  RuleFiles rule;
  std::filesystem::path out_dir;
};

// Writes names_all.txt and names_after_primary.txt.
NameLexicon CmdLexicon(const LexiconCommandConfig& config);

struct ToyTrainConfig {
  std::filesystem::path manifest;
  std::filesystem::path model_out;
  std::vector<std::string> splits{"train"};
  ToyAsrOptions options;
};

ToyAsrModel CmdToyTrain(const ToyTrainConfig& config);

struct MaskCommandConfig {
  std::filesystem::path manifest;
  RuleFiles rule;
  std::vector<MaskSpec> mask_specs;
  std::vector<std::string> settings;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
};

// Writes each masked clip plus queries.jsonl. Returns the query count.
std::size_t CmdMask(const MaskCommandConfig& config);

std::filesystem::path CmdGenFixtures(const FixtureOptions& options,
                                     const std::filesystem::path& out_dir);

// Seeds a spec's noise from the top-level seed.
MaskSpec SeededSpec(MaskSpec spec, std::uint64_t seed);

}  // namespace noisemask

#endif  // NOISEMASK_COMMANDS_H_
