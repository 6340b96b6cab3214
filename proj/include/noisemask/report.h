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

#ifndef NOISEMASK_REPORT_H_
#define NOISEMASK_REPORT_H_

#include <filesystem>
#include <span>
#include <string>

#include "noisemask/metrics.h"

namespace noisemask {

// One JSON object per line, in record order.
std::string RenderRecordsJsonl(std::span<const ExtractionRecord> records);

// {"rows": [...], "others": [...], "records": [...]}; percentages rounded
// to one decimal.
std::string RenderReportJson(const MetricsReport& report,
                             std::span<const ExtractionRecord> records);

// setting,noise,n,true_pct,any_pct,unique,extrapolated
// Each setting's "Others" row (blank n/unique/extrapolated) follows its
// per-noise rows.
std::string RenderReportCsv(const MetricsReport& report);

// report.json, report.csv and records.jsonl.
void WriteReportFiles(const std::filesystem::path& dir, const MetricsReport& report,
                      std::span<const ExtractionRecord> records);

}  // namespace noisemask

#endif  // NOISEMASK_REPORT_H_
