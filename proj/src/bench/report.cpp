// Copyright 2026 The spacelink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spacelink/bench/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "spacelink/common/error.hpp"

namespace spacelink::bench {

std::vector<ReportRow> BenchReport::deterministic_rows() const {
  std::vector<ReportRow> out;
  for (const auto& r : rows) {
    if (!r.timing) out.push_back(r);
  }
  return out;
}

const ReportRow* BenchReport::find(const std::string& mode, const std::string& metric) const {
  for (const auto& r : rows) {
    if (r.mode == mode && r.metric == metric) return &r;
  }
  return nullptr;
}

std::string format_value(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string format_value(std::uint64_t v) { return std::to_string(v); }

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_csv(const std::vector<BenchReport>& reports, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& rep : reports) {
    for (const auto& r : rep.rows) {
      out << csv_field(rep.scenario) << ',' << csv_field(r.mode) << ',' << csv_field(r.metric) << ','
          << csv_field(r.value) << ',' << csv_field(r.unit) << ',' << csv_field(r.seed) << ','
          << csv_field(r.profile) << ',' << csv_field(r.loss) << '\n';
    }
  }
}

void emit_csv(const std::vector<BenchReport>& reports, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::IoError, "cannot open " + path);
  write_csv(reports, f);
  f.flush();
  if (!f) throw Error(Errc::IoError, "write failed: " + path);
}

void emit_csv(const BenchReport& report, const std::string& path) { emit_csv(std::vector<BenchReport>{report}, path); }

}  // namespace spacelink::bench
