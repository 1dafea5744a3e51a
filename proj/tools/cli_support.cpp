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

#include "cli_support.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <sstream>

#include "spacelink/sdls/security_association.hpp"

namespace spacelink::tools {

endpoints::KeyMaterial load_keys(const KeyValueConfig& cfg, crypto::AeadAlgorithm alg) {
  auto keys = endpoints::KeyMaterial::from_seed(static_cast<std::uint64_t>(cfg.get_int("keys.seed", 1)), alg);
  if (auto path = cfg.find("sdls.keys")) {
    const auto sas = sdls::load_key_file(cfg.resolve_path(*path));
    const auto spi = static_cast<std::uint16_t>(cfg.get_int("sdls.spi", 1));
    auto it = sas.find(spi);
    if (it == sas.end()) throw Error(Errc::InvalidConfig, "no SA " + std::to_string(spi) + " in " + *path);
    keys.sa = it->second;
  }
  if (auto seed = cfg.find("identity.seed")) keys.identity_seed = array_from_hex<32>(*seed);
  return keys;
}

crypto::AeadAlgorithm parse_backend(const std::string& name) {
  if (name == "gcm") return crypto::AeadAlgorithm::Aes256Gcm;
  if (name == "chacha") return crypto::AeadAlgorithm::ChaCha20Poly1305;
  return crypto::parse_aead_algorithm(name);
}

std::vector<Action> parse_actions(const std::vector<std::string>& args) {
  std::vector<std::string> tokens;
  for (const auto& a : args) {
    std::istringstream in(a);
    for (std::string t; in >> t;) tokens.push_back(t);
  }
  std::vector<Action> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& t = tokens[i];
    Action a;
    a.text = t;
    if (t == "reconnect") {
      a.kind = Action::Kind::Reconnect;
    } else if (t == "wait") {
      if (i + 1 >= tokens.size()) throw Error(Errc::InvalidConfig, "wait needs <ms>");
      a.kind = Action::Kind::Wait;
      a.text += " " + tokens[++i];
      a.wait = Micros{std::stoll(tokens[i]) * 1000};
    } else {
      if (t == "set") {
        if (i + 2 >= tokens.size()) throw Error(Errc::InvalidConfig, "set needs <id> <value>");
        a.text += " " + tokens[i + 1] + " " + tokens[i + 2];
        i += 2;
      }
      auto cmd = endpoints::parse_command(a.text);
      if (!cmd) throw Error(Errc::InvalidConfig, "unknown command '" + a.text + "'");
      a.cmd = *cmd;
    }
    out.push_back(std::move(a));
  }
  return out;
}

namespace {
sockaddr_in loopback(std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  return addr;
}

[[noreturn]] void io_fail(const char* what) { throw Error(Errc::IoError, std::string(what) + ": " + std::strerror(errno)); }
}  // namespace

UdpSocket::UdpSocket(std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_DGRAM | SOCK_NONBLOCK, 0);
  if (fd_ < 0) io_fail("socket");
  auto addr = loopback(port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd_);
    io_fail("bind");
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

UdpSocket::~UdpSocket() {
  if (fd_ >= 0) ::close(fd_);
}

void UdpSocket::send_to(ByteView datagram, std::uint16_t port) {
  auto addr = loopback(port);
  if (::sendto(fd_, datagram.data(), datagram.size(), 0, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    if (errno != EAGAIN && errno != ECONNREFUSED) io_fail("sendto");
  }
}

std::optional<std::pair<Bytes, std::uint16_t>> UdpSocket::receive() {
  Bytes buf(65536);
  sockaddr_in from{};
  socklen_t len = sizeof from;
  const auto n = ::recvfrom(fd_, buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&from), &len);
  if (n < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == ECONNREFUSED) return std::nullopt;
    io_fail("recvfrom");
  }
  buf.resize(static_cast<std::size_t>(n));
  return std::pair{std::move(buf), ntohs(from.sin_port)};
}

bool UdpSocket::wait(Micros timeout) {
  pollfd p{fd_, POLLIN, 0};
  const auto us = std::clamp<std::int64_t>(timeout.count(), 0, 1'000'000);
  const timespec ts{static_cast<time_t>(us / 1'000'000), static_cast<long>(us % 1'000'000) * 1000};
  return ::ppoll(&p, 1, &ts, nullptr) > 0;
}

}  // namespace spacelink::tools
