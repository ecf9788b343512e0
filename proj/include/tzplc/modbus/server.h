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

#ifndef TZPLC_MODBUS_SERVER_H_
#define TZPLC_MODBUS_SERVER_H_

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "tzplc/modbus/bank.h"
#include "tzplc/net/tcp.h"

namespace tzplc::modbus {

// Turns an accepted raw connection into the stream the server speaks Modbus
// over (e.g. runs a secure-channel handshake). Throwing drops the connection.
using StreamWrapper =
    std::function<std::unique_ptr<net::ByteStream>(std::unique_ptr<net::ByteStream>)>;

struct ServerOptions {
  net::Endpoint bind{"127.0.0.1", 1502};
  StreamWrapper wrap;
  // Added before each response; models link latency in both directions.
  Duration request_delay{0};
  Duration response_delay{0};
  std::function<void(std::string_view)> log;
};

// Modbus/TCP server: one thread accepting, one thread per connection. A
// failing connection is logged and closed without affecting the others.
class Server {
 public:
  Server(net::TcpListener listener, std::shared_ptr<RequestHandler> handler,
         ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and starts serving. Throws net kPortInUse.
  static std::unique_ptr<Server> start(std::shared_ptr<RequestHandler> handler,
                                       ServerOptions options);

  std::uint16_t port() const { return port_; }
  net::Endpoint endpoint() const { return {options_.bind.host, port_}; }
  void stop();

 private:
  void accept_loop();
  void serve_connection(std::unique_ptr<net::TcpStream> raw);
  void log(const std::string& line) const;

  net::TcpListener listener_;
  std::uint16_t port_;
  std::shared_ptr<RequestHandler> handler_;
  ServerOptions options_;
  std::atomic<bool> stopping_{false};
  std::mutex mu_;
  std::vector<net::TcpStream*> live_;
  std::vector<std::thread> workers_;
  std::thread acceptor_;
};

}  // namespace tzplc::modbus

#endif  // TZPLC_MODBUS_SERVER_H_
