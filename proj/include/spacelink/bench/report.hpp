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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spacelink::bench {

struct ReportRow {
  std::string mode;
  std::string metric;
  std::string value;
  std::string unit;
  std::string seed;
  std::string profile;
  std::string loss;
  bool timing = false;  // wall-clock measurement, excluded from determinism checks
  bool operator==(const ReportRow&) const = default;
};

/// One benchmark scenario's rows, config echo and environment note included.
struct BenchReport {
  std::string scenario;
  std::vector<ReportRow> rows;

  void add(ReportRow row) { rows.push_back(std::move(row)); }
  /// Rows that must be reproducible for a fixed seed.
  std::vector<ReportRow> deterministic_rows() const;
  const ReportRow* find(const std::string& mode, const std::string& metric) const;
  bool empty() const noexcept { return rows.empty(); }
};

/// Fixed-precision decimal formatting so reports are byte-stable.
std::string format_value(double v, int decimals = 3);
std::string format_value(std::uint64_t v);

inline constexpr const char* kCsvHeader = "scenario,mode,metric,value,unit,seed,profile,loss";
inline constexpr const char* kEnvironmentNote =
    "absolute timings are hardware-relative; compare ratios and orderings";

void write_csv(const std::vector<BenchReport>& reports, std::ostream& out);
/// Writes header plus rows; throws IoError when the file cannot be written.
void emit_csv(const std::vector<BenchReport>& reports, const std::string& path);
void emit_csv(const BenchReport& report, const std::string& path);

}  // namespace spacelink::bench
