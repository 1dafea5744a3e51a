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

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "spacelink/crypto/asymmetric.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void on_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  using namespace spacelink;
  CLI::App app{"Flight node: CI, housekeeping and TO behind a selectable security layer, served over localhost UDP"};
  std::string mode_name;
  std::string backend = "gcm";
  std::string config_path;
  int port = -1;
  double duration = 0;
  bool quiet = false;
  app.add_option("--mode", mode_name, "Security layer")->required()->check(CLI::IsMember({"none", "sdls", "quic"}));
  app.add_option("--backend", backend, "AEAD backend")->check(CLI::IsMember({"gcm", "chacha"}));
  app.add_option("--config", config_path, "Key-value config file")->required()->check(CLI::ExistingFile);
  app.add_option("--port", port, "UDP port on 127.0.0.1 (default: udp.port or 47100)");
  app.add_option("--duration", duration, "Stop after this many seconds (0 runs until interrupted)");
  app.add_flag("--quiet", quiet, "Only print the final summary");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = KeyValueConfig::load(config_path);
    const endpoints::SecurityMode mode{endpoints::parse_mode(mode_name), tools::parse_backend(backend)};
    const auto keys = tools::load_keys(cfg, mode.backend);
    if (port < 0) port = static_cast<int>(cfg.get_int("udp.port", tools::kDefaultFlightPort));

    crypto::SystemRandom rng;
    quic::SessionConfig qcfg;
    endpoints::FlightNode node(endpoints::FlightConfig::from(cfg), endpoints::make_flight_link(mode, keys, qcfg, rng));
    tools::UdpSocket sock(static_cast<std::uint16_t>(port));
    tools::WallClock clock;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "flight " << endpoints::label(mode) << " listening on 127.0.0.1:" << sock.port() << std::endl;

    std::optional<std::uint16_t> peer;
    std::size_t logged = 0;
    const Micros stop_at = duration > 0 ? Micros{static_cast<std::int64_t>(duration * 1e6)} : kNever;
    while (!g_stop && clock.now() < stop_at) {
      const auto wake = std::min(node.next_wakeup(), stop_at);
      sock.wait(wake == kNever ? 1_s : wake - clock.now());
      const auto now = clock.now();
      while (auto in = sock.receive()) {
        peer = in->second;
        node.ci_ingest(in->first, now);
      }
      if (node.next_wakeup() <= now) node.on_timeout(now);
      node.step(now);
      while (auto out = node.poll_downlink(now)) {
        if (peer) sock.send_to(*out, *peer);
      }
      const auto& log = node.command_log();
      for (; logged < log.size(); ++logged) {
        if (quiet) continue;
        const auto& r = log[logged];
        std::cout << "cmd seq=" << r.seq << ' ' << endpoints::to_string(r.fc) << ' '
                  << (r.accepted ? "accepted" : "rejected " + endpoints::to_string(r.reason)) << std::endl;
      }
    }

    const auto& hk = node.hk_state();
    std::cout << "accepted=" << hk.cmd_accept_count << " rejected=" << hk.cmd_reject_count
              << " hk_published=" << node.hk_published() << " link_faults=" << node.link().stats().faults << std::endl;
  } catch (const std::exception& e) {
    std::cerr << "flight: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
