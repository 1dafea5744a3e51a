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

#include <iostream>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "spacelink/bench/scenarios.hpp"

int main(int argc, char** argv) {
  using namespace spacelink;
  CLI::App app{"Benchmark harness: crypto cost, security-state footprint, throughput under loss"};
  app.require_subcommand(1);
  std::vector<std::string> profiles;
  std::vector<double> losses;
  std::uint64_t seed = 1;
  std::string out;
  std::string backend = "gcm";
  std::size_t iters = 10000;
  std::size_t payload = 1 << 20;

  auto* crypto_cmd = app.add_subcommand("crypto", "Per-packet protect/unprotect cost, SDLS vs quiclite");
  auto* footprint_cmd = app.add_subcommand("footprint", "Peak security-layer state over the 100+100 script");
  auto* throughput_cmd = app.add_subcommand("throughput", "1 MiB transfer goodput and handshake latency");
  for (auto* sub : {crypto_cmd, footprint_cmd, throughput_cmd}) {
    sub->add_option("--seed", seed, "Seed");
    sub->add_option("--out", out, "CSV output file (default stdout)");
  }
  crypto_cmd->add_option("--iters", iters, "Timed iterations per size");
  for (auto* sub : {crypto_cmd, throughput_cmd}) {
    sub->add_option("--backend", backend, "AEAD backend")->check(CLI::IsMember({"gcm", "chacha"}));
  }
  throughput_cmd->add_option("--profile", profiles, "Channel profile(s)")->check(CLI::IsMember({"leo", "geo"}));
  throughput_cmd->add_option("--loss", losses, "Loss percentage(s)")->check(CLI::Range(0.0, 100.0));
  throughput_cmd->add_option("--payload", payload, "Transfer size in bytes");
  CLI11_PARSE(app, argc, argv);

  try {
    bench::BenchReport report;
    if (*crypto_cmd) {
      bench::CryptoOptions o;
      o.iters = iters;
      o.warmup = std::min<std::size_t>(iters / 10, 1000);
      o.seed = seed;
      o.backend = tools::parse_backend(backend);
      report = bench::bench_crypto(o);
    } else if (*footprint_cmd) {
      report = bench::bench_footprint(seed);
    } else {
      bench::ThroughputOptions o;
      if (!profiles.empty()) o.profiles = profiles;
      if (!losses.empty()) o.loss_percent = losses;
      o.seed = seed;
      o.payload_size = payload;
      o.backend = tools::parse_backend(backend);
      report = bench::bench_throughput(o);
    }
    if (out.empty()) {
      bench::write_csv({report}, std::cout);
    } else {
      bench::emit_csv(report, out);
      std::cerr << "wrote " << report.rows.size() << " rows to " << out << std::endl;
    }
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
