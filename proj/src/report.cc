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

#include "noisemask/report.h"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "noisemask/error.h"

namespace noisemask {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json RecordJson(const ExtractionRecord& r) {
  ordered_json j;
  j["utterance_id"] = r.utterance_id;
  j["target_index"] = r.target_index;
  j["noise"] = r.noise_kind;
  j["silence_noise"] = r.silence_noise;
  j["setting"] = r.setting;
  j["true_word"] = r.true_word;
  j["hypothesis"] = r.hypothesis;
  j["predicted"] = r.predicted ? ordered_json(*r.predicted) : ordered_json(nullptr);
  j["true_hit"] = r.is_true_hit;
  j["any_hit"] = r.is_any_hit;
  j["extrapolated"] = r.is_extrapolated;
  return j;
}

std::string Pct(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", RoundPct(pct));
  return buf;
}

// Quotes a CSV field when it needs it.
std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed: " + path.string());
}

}  // namespace

std::string RenderRecordsJsonl(std::span<const ExtractionRecord> records) {
  std::string out;
  for (const auto& r : records) out += RecordJson(r).dump() + "\n";
  return out;
}

std::string RenderReportJson(const MetricsReport& report, std::span<const ExtractionRecord> records) {
  ordered_json j;
  j["rows"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["setting"] = row.setting;
    r["noise"] = row.noise_kind;
    r["silence_noise"] = row.silence_noise;
    r["n"] = row.n;
    r["true_pct"] = RoundPct(row.true_pct);
    r["any_pct"] = RoundPct(row.any_pct);
    r["unique"] = row.unique_count;
    r["extrapolated"] = row.extrapolated_count;
    j["rows"].push_back(r);
  }
  j["others"] = ordered_json::array();
  for (const auto& o : report.others) {
    j["others"].push_back({{"setting", o.setting},
                           {"noise_count", o.noise_count},
                           {"true_pct", RoundPct(o.true_pct)},
                           {"any_pct", RoundPct(o.any_pct)}});
  }
  j["records"] = ordered_json::array();
  for (const auto& r : records) j["records"].push_back(RecordJson(r));
  return j.dump(2) + "\n";
}

std::string RenderReportCsv(const MetricsReport& report) {
  std::string out = "setting,noise,n,true_pct,any_pct,unique,extrapolated\n";
  auto others_for = [&](const std::string& setting) {
    for (const auto& o : report.others) {
      if (o.setting == setting) {
        out += CsvField(o.setting) + ",Others,," + Pct(o.true_pct) + "," + Pct(o.any_pct) + ",,\n";
      }
    }
  };
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& row = report.rows[i];
    out += CsvField(row.setting) + "," + CsvField(row.noise_kind) + "," + std::to_string(row.n) +
           "," + Pct(row.true_pct) + "," + Pct(row.any_pct) + "," + std::to_string(row.unique_count) +
           "," + std::to_string(row.extrapolated_count) + "\n";
    if (i + 1 == report.rows.size() || report.rows[i + 1].setting != row.setting) {
      others_for(row.setting);
    }
  }
  return out;
}

void WriteReportFiles(const std::filesystem::path& dir, const MetricsReport& report,
                      std::span<const ExtractionRecord> records) {
  std::filesystem::create_directories(dir);
  WriteText(dir / "report.json", RenderReportJson(report, records));
  WriteText(dir / "report.csv", RenderReportCsv(report));
  WriteText(dir / "records.jsonl", RenderRecordsJsonl(records));
}

}  // namespace noisemask
