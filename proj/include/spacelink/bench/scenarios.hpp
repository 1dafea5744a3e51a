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

#include <optional>
#include <vector>

#include "spacelink/bench/report.hpp"
#include "spacelink/channel/channel.hpp"
#include "spacelink/endpoints/link.hpp"

namespace spacelink::bench {

// Per-packet crypto cost.

struct TimingStats {
  double median_ns = 0;
  double p95_ns = 0;
};

/// Nearest-rank median and 95th percentile; zeros for an empty sample.
TimingStats summarize(std::vector<double> samples_ns);

struct CryptoOptions {
  std::vector<std::size_t> sizes{64, 256, 1024};
  std::size_t iters = 10000;
  std::size_t warmup = 1000;
  crypto::AeadAlgorithm backend = crypto::AeadAlgorithm::Aes256Gcm;
  std::uint64_t seed = 1;
};

struct CryptoResult {
  std::size_t size = 0;
  TimingStats sdls_apply, sdls_accept, quic_protect, quic_unprotect;
  double sdls_total_ns = 0;  // median apply + median accept
  double quic_total_ns = 0;  // median protect + median unprotect
  double ratio = 0;          // quic_total_ns / sdls_total_ns
};

BenchReport bench_crypto(const CryptoOptions& options, std::vector<CryptoResult>* results = nullptr);

// State footprint.

struct FootprintResult {
  endpoints::SecurityMode mode;
  std::size_t peak_bytes = 0;
  std::size_t final_bytes = 0;
  std::size_t ledger_final_bytes = 0;
  std::size_t hk_received = 0;
  std::size_t commands_accepted = 0;
};

inline constexpr std::size_t kScriptCommands = 100;

/// The standard script: `kScriptCommands` REQUEST_HK commands back to back
/// (each answered by one HK packet) over a lossless LEO link.
FootprintResult run_footprint(const endpoints::SecurityMode& mode, std::uint64_t seed);
BenchReport bench_footprint(std::uint64_t seed, std::vector<FootprintResult>* results = nullptr);

// Reliable transfer.

struct TransferResult {
  bool complete = false;
  bool intact = false;
  std::size_t delivered = 0;
  Micros elapsed{0};
  double goodput_bps = 0;  // bytes per virtual second
  std::uint64_t retransmissions = 0;
  std::uint64_t datagrams_sent = 0;
};

/// Ground -> flight transfer on one quiclite stream, handshake included.
TransferResult transfer_quic(const channel::ChannelConfig& channel, ByteView payload, crypto::AeadAlgorithm alg,
                             std::uint64_t seed, Micros limit);
/// The same transfer as SDLS frames under the stop-and-wait shim.
TransferResult transfer_sdls_arq(const channel::ChannelConfig& channel, ByteView payload, crypto::AeadAlgorithm alg,
                                 std::uint64_t seed, Micros limit);

struct HandshakeResult {
  Micros setup{0};                 // connect -> client may send application data
  std::optional<Micros> accepted;  // connect -> server delivers the first client byte
  bool established = false;
};

/// One connection; with `resumed`, a first connection obtains a ticket and
/// the measured second one uses it.
HandshakeResult measure_handshake(const channel::ChannelConfig& channel, crypto::AeadAlgorithm alg, std::uint64_t seed,
                                  bool resumed);

struct ThroughputOptions {
  std::vector<std::string> profiles{"leo", "geo"};
  std::vector<double> loss_percent{0, 1, 5, 10};
  std::uint64_t seed = 1;
  std::size_t payload_size = 1 << 20;
  crypto::AeadAlgorithm backend = crypto::AeadAlgorithm::Aes256Gcm;
  Micros limit = 7200_s;
};

/// SDLS frame payload per stop-and-wait chunk: one MSS minus SDLS and shim overhead.
std::size_t arq_chunk_size();

BenchReport bench_throughput(const ThroughputOptions& options);

}  // namespace spacelink::bench
