// include/alignts/metrics/report.hpp

// Copyright 2026  alignts authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "alignts/metrics/metrics.hpp"

namespace alignts::metrics {

// One evaluation row per (model, loss recipe): output-statistic columns
// (frames, peaks, delay) followed by error-rate and detection columns.
struct ReportRow {
  std::string model;   // "bigru" or "unigru"
  std::string recipe;  // loss recipe name
  double frames = 0.0;       // mean frames with non-blank posterior > 0.1
  double peaks = 0.0;        // mean peaks per utterance
  double delay_frames = 0.0;
  double delay_ms = 0.0;
  bool delay_available = false;
  double per = 0.0;
  double cper = 0.0;
  double iper = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

std::string report_tsv(std::span<const ReportRow> rows);
void write_report_tsv(const std::filesystem::path& path, std::span<const ReportRow> rows);
void write_report_json(const std::filesystem::path& path, std::span<const ReportRow> rows);

}  // namespace alignts::metrics
