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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "spacelink/bench/scenarios.hpp"
#include "spacelink/endpoints/arq.hpp"
#include "support.hpp"

namespace spacelink::bench {
namespace {

double value(const BenchReport& r, const std::string& mode, const std::string& metric) {
  const auto* row = r.find(mode, metric);
  if (!row) throw Error(Errc::InvalidConfig, "missing row " + mode + "/" + metric);
  return std::stod(row->value);
}

TEST(Report, CsvHasStableHeaderAndUnits) {
  const auto r = bench_footprint(1);
  std::ostringstream out;
  write_csv({r}, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7) << line;
  }
  EXPECT_EQ(rows, r.rows.size());
  for (const auto& row : r.rows) EXPECT_FALSE(row.unit.empty()) << row.metric;
  EXPECT_EQ(r.find("none", "peak_state")->unit, "bytes");
}

TEST(Report, UnwritablePathRaisesIoError) {
  try {
    emit_csv(BenchReport{"x", {}}, "/nonexistent-dir/out.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IoError);
  }
}

TEST(Report, WritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "spacelink_bench_test.csv";
  emit_csv(bench_footprint(1), path.string());
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, kCsvHeader);
  std::filesystem::remove(path);
}

TEST(Report, FixedPrecisionFormatting) {
  EXPECT_EQ(format_value(1.0 / 3.0), "0.333");
  EXPECT_EQ(format_value(2.5, 1), "2.5");
  EXPECT_EQ(format_value(std::uint64_t{42}), "42");
}

TEST(Summary, NearestRank) {
  std::vector<double> s;
  for (int i = 1; i <= 100; ++i) s.push_back(i);
  const auto t = summarize(s);
  EXPECT_DOUBLE_EQ(t.median_ns, 50);
  EXPECT_DOUBLE_EQ(t.p95_ns, 95);
  EXPECT_DOUBLE_EQ(summarize({}).median_ns, 0);
}

TEST(CryptoBench, ZeroIterationsGivesEmptyReport) {
  CryptoOptions o;
  o.iters = 0;
  EXPECT_TRUE(bench_crypto(o).empty());
}

TEST(CryptoBench, ReportsEverySizeAndMarksTiming) {
  CryptoOptions o;
  o.iters = 200;
  o.warmup = 20;
  std::vector<CryptoResult> results;
  const auto r = bench_crypto(o, &results);
  ASSERT_EQ(results.size(), 3u);
  for (const auto& c : results) {
    EXPECT_GT(c.sdls_total_ns, 0);
    EXPECT_GT(c.quic_total_ns, 0);
    EXPECT_NEAR(c.ratio, c.quic_total_ns / c.sdls_total_ns, 1e-9);
  }
  ASSERT_TRUE(r.find("ratio", "quic_over_sdls.1024"));
  EXPECT_TRUE(r.find("ratio", "quic_over_sdls.1024")->timing);
  EXPECT_FALSE(r.find("all", "note")->timing);
}

TEST(FootprintBench, OrderingAndDrainedLedger) {
  std::vector<FootprintResult> results;
  const auto r = bench_footprint(1, &results);
  ASSERT_EQ(results.size(), 4u);
  EXPECT_EQ(value(r, "none", "peak_state"), 0);
  EXPECT_LT(value(r, "none", "peak_state"), value(r, "sdls-gcm", "peak_state"));
  EXPECT_LT(value(r, "sdls-gcm", "peak_state"), value(r, "quic-gcm", "peak_state"));
  for (const auto& f : results) {
    EXPECT_EQ(f.commands_accepted, kScriptCommands);
    EXPECT_EQ(f.hk_received, kScriptCommands);
    EXPECT_EQ(f.ledger_final_bytes, 0u) << endpoints::label(f.mode);
  }
}

TEST(ThroughputBench, LosslessTransfersAreIntact) {
  Xoshiro256 rng(1);
  const auto payload = testing::random_bytes(rng, 64 * 1024);
  for (const auto* profile : {"leo", "geo"}) {
    const auto ch = channel::profile_by_name(profile);
    const auto q = transfer_quic(ch, payload, crypto::AeadAlgorithm::Aes256Gcm, 1, 3600_s);
    const auto s = transfer_sdls_arq(ch, payload, crypto::AeadAlgorithm::Aes256Gcm, 1, 3600_s);
    EXPECT_TRUE(q.complete && q.intact) << profile;
    EXPECT_TRUE(s.complete && s.intact) << profile;
    EXPECT_EQ(q.retransmissions, 0u);
    EXPECT_EQ(s.retransmissions, 0u);
  }
}

TEST(ThroughputBench, StopAndWaitRespectsAnalyticBound) {
  Xoshiro256 rng(2);
  const auto payload = testing::random_bytes(rng, 32 * 1024);
  auto ch = channel::geo_profile();
  const auto s = transfer_sdls_arq(ch, payload, crypto::AeadAlgorithm::Aes256Gcm, 1, 3600_s);
  const double bound = static_cast<double>(arq_chunk_size()) / 0.550;
  EXPECT_LE(s.goodput_bps, bound);
  EXPECT_EQ(arq_chunk_size(), quic::kMss - sdls::kFrameOverhead - endpoints::kArqHeaderSize);
}

TEST(ThroughputBench, HandshakeRoundTrips) {
  const auto ch = channel::geo_profile();
  const auto full = measure_handshake(ch, crypto::AeadAlgorithm::Aes256Gcm, 1, false);
  const auto resumed = measure_handshake(ch, crypto::AeadAlgorithm::Aes256Gcm, 1, true);
  EXPECT_TRUE(full.established);
  EXPECT_EQ(full.setup, 550_ms);
  EXPECT_EQ(resumed.setup, 0_ms);
  ASSERT_TRUE(resumed.accepted);
  EXPECT_EQ(*resumed.accepted, 275_ms);
}

TEST(ThroughputBench, DeterministicRows) {
  ThroughputOptions o;
  o.profiles = {"leo"};
  o.loss_percent = {5};
  o.payload_size = 32 * 1024;
  EXPECT_EQ(bench_throughput(o).deterministic_rows(), bench_throughput(o).deterministic_rows());
}

}  // namespace
}  // namespace spacelink::bench
