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

#include <functional>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "cli_support.hpp"
#include "spacelink/crypto/asymmetric.hpp"

namespace {

using namespace spacelink;
using endpoints::CommandOutcome;
using endpoints::GroundStation;

/// The ground station plus whatever carries its datagrams.
class Driver {
 public:
  virtual ~Driver() = default;
  virtual Micros now() const = 0;
  virtual GroundStation& ground() = 0;
  virtual bool run_until(const std::function<bool()>& done, Micros limit) = 0;
  virtual void reconnect() = 0;
  virtual void start_connect() { ground().connect(now()); }
  virtual std::uint16_t send(const endpoints::Command& cmd) { return ground().send_command(cmd, now()); }

  void connect() {
    start_connect();
    run_until([&] { return ground().connected(); }, now() + 60_s);
  }

  std::pair<std::uint16_t, CommandOutcome> command(const endpoints::Command& cmd) {
    const auto seq = send(cmd);
    const auto limit = ground().find(seq)->deadline + 1_us;
    run_until([&] { return ground().outcome(seq) != CommandOutcome::Pending; }, limit);
    return {seq, ground().outcome(seq)};
  }

 protected:
  static std::optional<quic::ResumptionTicket> ticket_of(const GroundStation& g) {
    const auto* link = dynamic_cast<const endpoints::QuicClientLink*>(&g.link());
    if (!link || !link->session()) return std::nullopt;
    return link->session()->issued_ticket();
  }
};

/// Flight node and ground on one virtual timeline.
class SimDriver final : public Driver {
 public:
  explicit SimDriver(const endpoints::TestbedConfig& cfg) : tb_(cfg) {}
  Micros now() const override { return tb_.now(); }
  GroundStation& ground() override { return tb_.ground(); }
  bool run_until(const std::function<bool()>& done, Micros limit) override { return tb_.run_until(done, limit); }
  void start_connect() override { tb_.connect(); }
  std::uint16_t send(const endpoints::Command& cmd) override { return tb_.send_command(cmd); }
  void reconnect() override {
    tb_.reconnect(tb_.ground_ticket());
    connect();
  }

 private:
  endpoints::Testbed tb_;
};

/// Ground against a flight process over localhost UDP. The channel model
/// runs on the wall clock in front of the socket, so profile delay and loss
/// still apply.
class LiveDriver final : public Driver {
 public:
  LiveDriver(const endpoints::TestbedConfig& cfg, const endpoints::KeyMaterial& keys, std::uint16_t flight_port)
      : cfg_(cfg), keys_(keys), channel_(cfg.channel), sock_(0), flight_port_(flight_port) {
    make_ground(std::nullopt);
  }
  Micros now() const override { return clock_.now(); }
  GroundStation& ground() override { return *ground_; }

  bool run_until(const std::function<bool()>& done, Micros limit) override {
    for (;;) {
      const auto t = clock_.now();
      for (auto& ev : channel_.advance(t)) {
        if (ev.direction == channel::Direction::Up) {
          sock_.send_to(ev.datagram, flight_port_);
        } else {
          ground_->on_downlink(ev.datagram, t);
        }
      }
      while (auto in = sock_.receive()) channel_.send(in->first, channel::Direction::Down, t);
      if (ground_->next_wakeup() <= t) ground_->on_timeout(t);
      while (auto out = ground_->poll_uplink(t)) channel_.send(*out, channel::Direction::Up, t);
      if (done() || t >= limit) break;
      const auto wake = std::min({channel_.next_delivery(), ground_->next_wakeup(), limit});
      sock_.wait(wake - t);
    }
    return done();
  }

  void reconnect() override {
    make_ground(ticket_of(*ground_));
    connect();
  }

 private:
  void make_ground(std::optional<quic::ResumptionTicket> ticket) {
    endpoints::GroundConfig g;
    g.routes = cfg_.flight.routes;
    g.one_way_delay = cfg_.channel.one_way_delay;
    g.deadline = cfg_.command_deadline;
    ground_ = std::make_unique<GroundStation>(
        g, endpoints::make_ground_link(cfg_.mode, keys_, cfg_.quic, rng_, std::move(ticket)));
  }

  endpoints::TestbedConfig cfg_;
  endpoints::KeyMaterial keys_;
  crypto::SystemRandom rng_;
  channel::Channel channel_;
  tools::UdpSocket sock_;
  tools::WallClock clock_;
  std::uint16_t flight_port_;
  std::unique_ptr<GroundStation> ground_;
};

double ms(Micros t) { return static_cast<double>(t.count()) / 1000.0; }

void run(Driver& d, const tools::Action& a) {
  switch (a.kind) {
    case tools::Action::Kind::Wait:
      d.run_until([] { return false; }, d.now() + a.wait);
      std::cout << a.text << " done at " << ms(d.now()) << " ms" << std::endl;
      return;
    case tools::Action::Kind::Reconnect:
      if (d.ground().link().mode() != endpoints::Mode::Quic) {
        std::cout << "reconnect applies to quic mode only" << std::endl;
        return;
      }
      d.reconnect();
      std::cout << "reconnect " << (d.ground().connected() ? "ready" : "failed") << " at " << ms(d.now()) << " ms"
                << std::endl;
      return;
    case tools::Action::Kind::Command: {
      const auto [seq, outcome] = d.command(a.cmd);
      const auto* p = d.ground().find(seq);
      std::cout << "seq=" << seq << ' ' << a.text << " -> " << endpoints::to_string(outcome);
      if (outcome == CommandOutcome::Rejected) std::cout << " (" << endpoints::to_string(p->reason) << ')';
      if (p->resolved_at) std::cout << " in " << ms(*p->resolved_at - p->sent_at) << " ms";
      std::cout << std::endl;
      return;
    }
  }
}

void summary(Driver& d) {
  auto& g = d.ground();
  std::cout << "hk_received=" << g.hk_received().size() << " events=" << g.events_received().size()
            << " downlink_faults=" << g.downlink_faults() << " rtt_estimate_ms=" << ms(g.rtt_estimate()) << std::endl;
  if (!g.hk_received().empty()) {
    const auto& hk = g.hk_received().back();
    std::cout << "last hk: accepted=" << hk.cmd_accept_count << " rejected=" << hk.cmd_reject_count << " params=";
    for (std::size_t i = 0; i < hk.params.size(); ++i) std::cout << (i ? "," : "") << hk.params[i];
    std::cout << " uptime_ms=" << static_cast<double>(hk.uptime_us) / 1000.0 << std::endl;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground client: sends commands to the flight node and reports their outcome"};
  std::string mode_name;
  std::string backend = "gcm";
  std::string profile = "leo";
  std::string config_path;
  double loss = 0;
  std::uint64_t seed = 1;
  bool interactive = false;
  bool live = false;
  int port = -1;
  double deadline_ms = 0;
  std::vector<std::string> commands;
  app.add_option("--mode", mode_name, "Security layer")->required()->check(CLI::IsMember({"none", "sdls", "quic"}));
  app.add_option("--backend", backend, "AEAD backend")->check(CLI::IsMember({"gcm", "chacha"}));
  app.add_option("--profile", profile, "Channel profile")->check(CLI::IsMember({"leo", "geo"}));
  app.add_option("--loss", loss, "Loss rate in percent")->check(CLI::Range(0.0, 100.0));
  app.add_option("--seed", seed, "Channel seed");
  app.add_option("--config", config_path, "Key-value config file (keys, routes)")->check(CLI::ExistingFile);
  app.add_flag("--interactive", interactive, "Read further commands from stdin");
  app.add_flag("--live", live, "Talk to a running flight process over localhost UDP");
  app.add_option("--port", port, "Flight UDP port (default: udp.port or 47100)");
  app.add_option("--deadline-ms", deadline_ms, "Fixed command deadline (default 4x RTT estimate)");
  app.add_option("commands", commands, "noop | reset | hk | set <id> <value> | reconnect | wait <ms>");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
    const auto script = tools::parse_actions(commands);

    endpoints::TestbedConfig tc;
    tc.mode = {endpoints::parse_mode(mode_name), tools::parse_backend(backend)};
    tc.channel = channel::config_from(cfg, channel::profile_by_name(profile));
    tc.channel.loss_rate = loss / 100.0;
    tc.channel.seed = seed;
    tc.channel.validate();
    tc.flight = endpoints::FlightConfig::from(cfg);
    if (deadline_ms > 0) tc.command_deadline = Micros{static_cast<std::int64_t>(deadline_ms * 1000)};
    tc.keys = tools::load_keys(cfg, tc.mode.backend);
    if (port < 0) port = static_cast<int>(cfg.get_int("udp.port", tools::kDefaultFlightPort));

    std::unique_ptr<Driver> d;
    if (live) {
      d = std::make_unique<LiveDriver>(tc, *tc.keys, static_cast<std::uint16_t>(port));
    } else {
      d = std::make_unique<SimDriver>(tc);
    }
    std::cout << "ground " << endpoints::label(tc.mode) << " profile=" << profile << " loss=" << loss << "% seed=" << seed
              << (live ? " live" : " simulated") << std::endl;
    d->connect();
    if (!d->ground().connected()) {
      std::cout << "connect failed" << std::endl;
      return 2;
    }
    std::cout << "connected at " << ms(d->now()) << " ms" << std::endl;

    for (const auto& a : script) run(*d, a);
    if (interactive) {
      std::cout << "> " << std::flush;
      for (std::string line; std::getline(std::cin, line); std::cout << "> " << std::flush) {
        if (line == "quit" || line == "exit") break;
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        try {
          for (const auto& a : tools::parse_actions({line})) run(*d, a);
        } catch (const Error& e) {
          std::cout << "error: " << e.what() << std::endl;
        }
      }
    }
    d->run_until([] { return false; }, d->now() + 2 * tc.channel.one_way_delay + 1_ms);
    summary(*d);
  } catch (const std::exception& e) {
    std::cerr << "ground: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
