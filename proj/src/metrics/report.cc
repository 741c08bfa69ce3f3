// src/metrics/report.cc

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

#include "alignts/metrics/report.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

#include "alignts/common/error.hpp"

namespace alignts::metrics {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string report_tsv(std::span<const ReportRow> rows) {
  std::string out =
      "model\trecipe\tframes\tpeaks\tdelay_frames\tdelay_ms\tper\tcper\tiper\tprecision\trecall\tf1\n";
  for (const ReportRow& r : rows) {
    out += r.model + "\t" + r.recipe + "\t" + fmt(r.frames) + "\t" + fmt(r.peaks) + "\t";
    out += r.delay_available ? fmt(r.delay_frames) : "n/a";
    out += "\t";
    out += r.delay_available ? fmt(r.delay_ms) : "n/a";
    out += "\t" + fmt(r.per) + "\t" + fmt(r.cper) + "\t" + fmt(r.iper) + "\t" + fmt(r.precision) +
           "\t" + fmt(r.recall) + "\t" + fmt(r.f1) + "\n";
  }
  return out;
}

void write_report_tsv(const std::filesystem::path& path, std::span<const ReportRow> rows) {
  std::ofstream os(path, std::ios::trunc);
  ALIGNTS_CHECK(os.is_open(), "cannot open for writing: ", path.string());
  os << report_tsv(rows);
  os.close();
  ALIGNTS_CHECK(os.good(), "report write failed: ", path.string());
}

void write_report_json(const std::filesystem::path& path, std::span<const ReportRow> rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json j{{"model", r.model},         {"recipe", r.recipe},
                     {"frames", r.frames},       {"peaks", r.peaks},
                     {"per", r.per},             {"cper", r.cper},
                     {"iper", r.iper},           {"precision", r.precision},
                     {"recall", r.recall},       {"f1", r.f1},
                     {"delay_available", r.delay_available}};
    if (r.delay_available) {
      j["delay_frames"] = r.delay_frames;
      j["delay_ms"] = r.delay_ms;
    }
    arr.push_back(std::move(j));
  }
  std::ofstream os(path, std::ios::trunc);
  ALIGNTS_CHECK(os.is_open(), "cannot open for writing: ", path.string());
  os << arr.dump(2) << "\n";
  os.close();
  ALIGNTS_CHECK(os.good(), "report write failed: ", path.string());
}

}  // namespace alignts::metrics
