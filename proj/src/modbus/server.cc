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

#include "tzplc/modbus/server.h"

#include <algorithm>
#include <chrono>

namespace tzplc::modbus {

namespace {

constexpr Duration kPoll = std::chrono::milliseconds(50);
constexpr Duration kIdle = std::chrono::seconds(600);

// Lets the wrapper own "a stream" while the socket itself stays owned (and
// registered for shutdown) by the connection thread.
class BorrowedStream final : public net::ByteStream {
 public:
  explicit BorrowedStream(net::ByteStream& inner) : inner_(&inner) {}
  void write_all(ByteSpan data) override { inner_->write_all(data); }
  void read_exact(MutableByteSpan out, Duration timeout) override {
    inner_->read_exact(out, timeout);
  }
  void close() override { inner_->close(); }

 private:
  net::ByteStream* inner_;
};

}  // namespace

Server::Server(net::TcpListener listener, std::shared_ptr<RequestHandler> handler,
               ServerOptions options)
    : listener_(std::move(listener)),
      port_(listener_.port()),
      handler_(std::move(handler)),
      options_(std::move(options)) {
  acceptor_ = std::thread([this] { accept_loop(); });
}

Server::~Server() { stop(); }

std::unique_ptr<Server> Server::start(std::shared_ptr<RequestHandler> handler,
                                      ServerOptions options) {
  auto listener = net::TcpListener::bind(options.bind);
  return std::make_unique<Server>(std::move(listener), std::move(handler),
                                  std::move(options));
}

void Server::log(const std::string& line) const {
  if (options_.log) options_.log(line);
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  if (acceptor_.joinable()) acceptor_.join();
  listener_.close();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (net::TcpStream* s : live_) s->close();
    workers.swap(workers_);
  }
  for (auto& t : workers) t.join();
}

void Server::accept_loop() {
  while (!stopping_) {
    auto conn = listener_.accept(kPoll);
    if (!conn) continue;
    std::lock_guard lock(mu_);
    if (stopping_) break;
    net::TcpStream* raw = conn->get();
    live_.push_back(raw);
    workers_.emplace_back(
        [this, c = std::move(*conn)]() mutable { serve_connection(std::move(c)); });
  }
}

void Server::serve_connection(std::unique_ptr<net::TcpStream> raw) {
  net::TcpStream* raw_ptr = raw.get();
  std::unique_ptr<net::ByteStream> stream;
  try {
    auto borrowed = std::make_unique<BorrowedStream>(*raw);
    stream = options_.wrap ? options_.wrap(std::move(borrowed)) : std::move(borrowed);
    while (!stopping_) {
      Bytes frame(kMbapSize);
      try {
        stream->read_exact(frame, kIdle);
      } catch (const net::NetError& e) {
        if (e.code() == net::NetErrc::kTimeout) continue;
        throw;
      }
      std::uint16_t length = get_u16(frame, 4);
      if (get_u16(frame, 2) != 0 || length < 2 || length > kMaxPduData + 2) {
        log("dropping connection: bad MBAP header");
        break;
      }
      frame.resize(6 + length);
      stream->read_exact(MutableByteSpan(frame).subspan(kMbapSize), kIdle);
      MbapHeader header{get_u16(frame, 0), 0, 0, frame[6]};
      Pdu request{frame[kMbapSize], Bytes(frame.begin() + kMbapSize + 1, frame.end())};
      if (options_.request_delay.count() > 0) {
        std::this_thread::sleep_for(options_.request_delay);
      }
      Pdu response = is_supported_function(request.function) &&
                             !request.is_exception()
                         ? handler_->handle(header.unit_id, request)
                         : exception_response(request.function, exc::kIllegalFunction);
      if (options_.response_delay.count() > 0) {
        std::this_thread::sleep_for(options_.response_delay);
      }
      stream->write_all(encode_frame(header, response));
    }
  } catch (const std::exception& e) {
    if (!stopping_) log(std::string("connection closed: ") + e.what());
  }
  stream.reset();
  std::lock_guard lock(mu_);
  live_.erase(std::remove(live_.begin(), live_.end(), raw_ptr), live_.end());
}

}  // namespace tzplc::modbus
