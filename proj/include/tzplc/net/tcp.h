// Copyright 2026 The tzplc Authors
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

#ifndef TZPLC_NET_TCP_H_
#define TZPLC_NET_TCP_H_

#include <memory>
#include <optional>

#include "tzplc/net/stream.h"

namespace tzplc::net {

class TcpStream final : public ByteStream {
 public:
  explicit TcpStream(int fd);
  ~TcpStream() override;
  TcpStream(const TcpStream&) = delete;
  TcpStream& operator=(const TcpStream&) = delete;

  void write_all(ByteSpan data) override;
  void read_exact(MutableByteSpan out, Duration timeout) override;
  void close() override;

 private:
  int fd_;
};

std::unique_ptr<TcpStream> tcp_connect(const Endpoint& endpoint, Duration timeout);

class TcpConnector final : public Connector {
 public:
  std::unique_ptr<ByteStream> connect(const Endpoint& endpoint,
                                      Duration timeout) override {
    return tcp_connect(endpoint, timeout);
  }
};

class TcpListener {
 public:
  // Port 0 binds an ephemeral port; see port(). Throws kPortInUse.
  static TcpListener bind(const Endpoint& endpoint);

  TcpListener(TcpListener&& other) noexcept;
  TcpListener& operator=(TcpListener&& other) noexcept;
  ~TcpListener();

  std::uint16_t port() const { return port_; }
  // Returns nullopt when no connection arrived within `timeout`.
  std::optional<std::unique_ptr<TcpStream>> accept(Duration timeout);
  void close();

 private:
  TcpListener(int fd, std::uint16_t port) : fd_(fd), port_(port) {}

  int fd_ = -1;
  std::uint16_t port_ = 0;
};

}  // namespace tzplc::net

#endif  // TZPLC_NET_TCP_H_
