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

// noisemask: noise masking extraction audits for speech recognizers.
//
//   noisemask gen-fixtures --n 200 --out corpus/
//   noisemask toy-train --manifest corpus/manifest.jsonl --out toy.model
//   noisemask audit --manifest corpus/manifest.jsonl --endpoint toy:toy.model \
//       --noise silence --noise white --out audit/

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "noisemask/commands.h"
#include "noisemask/error.h"

namespace {

using namespace noisemask;

std::vector<std::string> SplitCommas(const std::vector<std::string>& values) {
  std::vector<std::string> out;
  for (const auto& v : values) {
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(item);
    }
  }
  return out;
}

std::vector<MaskSpec> BuildSpecs(const std::vector<std::string>& noises,
                                 const std::vector<std::string>& durations, std::int64_t margin) {
  std::vector<MaskSpec> specs;
  const auto noise_list = noises.empty() ? std::vector<std::string>{"silence"} : SplitCommas(noises);
  const auto duration_list =
      durations.empty() ? std::vector<std::string>{"match"} : SplitCommas(durations);
  for (const auto& n : noise_list) {
    for (const auto& d : duration_list) {
      MaskSpec spec;
      spec.noise = ParseNoiseSource(n, 0);
      spec.fixed_duration_ms = ParseDurationMode(d);
      spec.margin_ms = margin;
      spec.Validate();
      specs.push_back(spec);
    }
  }
  return specs;
}

void AddRuleOptions(CLI::App* cmd, RuleFiles& rule) {
  cmd->add_option("--keywords", rule.keywords, "Title keyword file, one token per line");
  cmd->add_option("--stoplist", rule.stoplist, "Stoplist file, one token per line");
  cmd->add_option("--primary", rule.primary_keyword, "Primary title keyword")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise masking extraction audits for speech recognizers"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out;
  app.add_option("--seed", seed, "Top-level random seed")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  app.add_option("--out", out, "Output location");

  // audit
  AuditConfig audit;
  std::vector<std::string> audit_noises, audit_durations, audit_settings;
  std::int64_t audit_margin = kDefaultMarginMs;
  std::string extraction = "wildcard";
  int timeout_ms = 30000;
  auto* audit_cmd = app.add_subcommand("audit", "Run a noise masking audit against an endpoint");
  audit_cmd->add_option("--manifest", audit.manifest, "Corpus manifest")->required();
  audit_cmd->add_option("--endpoint", audit.endpoint,
                        "toy:<model> | cmd:<shell command> | http:<url>")->required();
  audit_cmd->add_option("--noise", audit_noises,
                        "silence | white | pink | file:<wav>[=label] (repeatable)");
  audit_cmd->add_option("--duration", audit_durations, "match | <ms> (repeatable)");
  audit_cmd->add_option("--margin", audit_margin, "Margin on both sides, ms")->capture_default_str();
  audit_cmd->add_option("--settings", audit_settings, "Splits to audit (default: all)");
  audit_cmd->add_option("--max-inflight", audit.limits.max_inflight,
                        "Concurrent requests per endpoint")->capture_default_str();
  audit_cmd->add_option("--timeout-ms", timeout_ms, "Per-request timeout")->capture_default_str();
  audit_cmd->add_option("--extraction", extraction, "wildcard | after-keyword")
      ->check(CLI::IsMember({"wildcard", "after-keyword"}))->capture_default_str();
  audit_cmd->add_flag("--dump-masked", audit.dump_masked, "Also write every masked clip");
  AddRuleOptions(audit_cmd, audit.rule);

  // augment
  AugmentCommandConfig augment;
  std::optional<std::size_t> dropout_k;
  std::vector<std::string> mtr_noises;
  std::string mtr_snr = "5:25";
  double mtr_fraction = 0.2;
  auto* augment_cmd = app.add_subcommand("augment", "Write a mitigation-augmented corpus");
  augment_cmd->add_option("--manifest", augment.manifest, "Corpus manifest")->required();
  augment_cmd->add_flag("--name-silencing", augment.name_silencing, "Remove and silence names");
  augment_cmd->add_option("--word-dropout", dropout_k, "Drop and silence K words per utterance");
  augment_cmd->add_option("--mtr-noise", mtr_noises, "Enable MTR with these noise sources");
  augment_cmd->add_option("--mtr-fraction", mtr_fraction, "Fraction of noisy utterances")
      ->capture_default_str();
  augment_cmd->add_option("--mtr-snr", mtr_snr, "SNR range lo:hi in dB")->capture_default_str();
  AddRuleOptions(augment_cmd, augment.rule);

  // lexicon
  LexiconCommandConfig lexicon;
  auto* lexicon_cmd = app.add_subcommand("lexicon", "Tabulate the name lexicon");
  lexicon_cmd->add_option("--manifest", lexicon.manifest, "Corpus manifest (train splits)");
  lexicon_cmd->add_option("--transcripts", lexicon.transcripts, "Text file, one transcript per line");
  AddRuleOptions(lexicon_cmd, lexicon.rule);

  // mask
  MaskCommandConfig mask;
  std::vector<std::string> mask_noises, mask_durations, mask_settings;
  std::int64_t mask_margin = kDefaultMarginMs;
  auto* mask_cmd = app.add_subcommand("mask", "Write masked query clips");
  mask_cmd->add_option("--manifest", mask.manifest, "Corpus manifest")->required();
  mask_cmd->add_option("--noise", mask_noises, "Noise sources (repeatable)");
  mask_cmd->add_option("--duration", mask_durations, "match | <ms> (repeatable)");
  mask_cmd->add_option("--margin", mask_margin, "Margin on both sides, ms")->capture_default_str();
  mask_cmd->add_option("--settings", mask_settings, "Splits to mask (default: all)");
  AddRuleOptions(mask_cmd, mask.rule);

  // toy-train
  ToyTrainConfig toy;
  std::vector<std::string> toy_splits;
  auto* toy_cmd = app.add_subcommand("toy-train", "Train the builtin toy recognizer");
  toy_cmd->add_option("--manifest", toy.manifest, "Corpus manifest")->required();
  toy_cmd->add_option("--splits", toy_splits, "Training splits (default: train)");
  toy_cmd->add_option("--threshold", toy.options.match_threshold, "Template match threshold")
      ->capture_default_str();

  // gen-fixtures
  FixtureOptions fixtures;
  std::vector<std::string> names;
  auto* gen_cmd = app.add_subcommand("gen-fixtures", "Generate a synthetic fixture corpus");
  gen_cmd->add_option("--n", fixtures.n_utterances, "Utterance count")->capture_default_str();
  gen_cmd->add_option("--names", names, "Name pool (comma separated)");
  gen_cmd->add_option("--zipf", fixtures.zipf_exponent, "Zipf exponent over the name pool")
      ->capture_default_str();
  gen_cmd->add_option("--test-fraction", fixtures.test_fraction, "Share of test-split utterances")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  const std::string stage_name = "config";
  try {
    if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "--out is required");

    if (*audit_cmd) {
      audit.mask_specs = BuildSpecs(audit_noises, audit_durations, audit_margin);
      audit.settings = SplitCommas(audit_settings);
      audit.out_dir = out;
      audit.jobs = jobs;
      audit.seed = seed;
      audit.limits.timeout = std::chrono::milliseconds(timeout_ms);
      audit.extraction = extraction == "wildcard" ? ExtractionMode::kWildcardAlignment
                                                  : ExtractionMode::kAfterKeyword;
      const AuditResult result = CmdAudit(audit);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "audited " << result.records.size() << " queries into " << out << "\n";
    } else if (*augment_cmd) {
      augment.out_dir = out;
      augment.seed = seed;
      augment.word_dropout_k = dropout_k;
      if (!mtr_noises.empty()) {
        augment.mtr = true;
        augment.mtr_config.seed = seed;
        augment.mtr_config.mtr_noisy_fraction = mtr_fraction;
        const auto colon = mtr_snr.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::kInvalidArgument, "--mtr-snr is lo:hi");
        augment.mtr_config.mtr_snr_lo_db = std::stod(mtr_snr.substr(0, colon));
        augment.mtr_config.mtr_snr_hi_db = std::stod(mtr_snr.substr(colon + 1));
        for (const auto& n : SplitCommas(mtr_noises)) {
          augment.mtr_config.noise_bank.push_back(ParseNoiseSource(n, seed));
        }
      }
      std::cout << "wrote " << CmdAugment(augment).string() << "\n";
    } else if (*lexicon_cmd) {
      lexicon.out_dir = out;
      const NameLexicon lex = CmdLexicon(lexicon);
      std::cout << lex.all_names.size() << " names, " << lex.after_primary.size() << " after '"
                << lexicon.rule.primary_keyword << "'\n";
    } else if (*mask_cmd) {
      mask.mask_specs = BuildSpecs(mask_noises, mask_durations, mask_margin);
      mask.settings = SplitCommas(mask_settings);
      mask.out_dir = out;
      mask.seed = seed;
      std::cout << "wrote " << CmdMask(mask) << " masked queries\n";
    } else if (*toy_cmd) {
      toy.model_out = out;
      if (!toy_splits.empty()) toy.splits = SplitCommas(toy_splits);
      const ToyAsrModel model = CmdToyTrain(toy);
      std::cout << "trained toy model with " << model.templates.size() << " word types\n";
    } else if (*gen_cmd) {
      fixtures.seed = seed;
      if (!names.empty()) fixtures.name_pool = SplitCommas(names);
      std::cout << "wrote " << CmdGenFixtures(fixtures, out).string() << "\n";
    }
  } catch (const StageError& e) {
    std::cerr << "error [" << e.stage() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [" << stage_name << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
