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

#include "tzplc/net/tcp.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>

#include <algorithm>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

namespace tzplc::net {

std::string_view to_string(NetErrc code) {
  switch (code) {
    case NetErrc::kTimeout:
      return "Timeout";
    case NetErrc::kClosed:
      return "TransportClosed";
    case NetErrc::kConnectFailed:
      return "ConnectFailed";
    case NetErrc::kPortInUse:
      return "PortInUse";
    case NetErrc::kIo:
      return "IoError";
  }
  return "NetError";
}

namespace {

int to_poll_ms(Duration timeout) {
  auto ms = std::chrono::ceil<std::chrono::milliseconds>(timeout).count();
  return static_cast<int>(std::max<std::int64_t>(ms, 0));
}

sockaddr_in resolve(const Endpoint& endpoint) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(endpoint.port);
  if (inet_pton(AF_INET, endpoint.host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  addrinfo* result = nullptr;
  if (getaddrinfo(endpoint.host.c_str(), nullptr, &hints, &result) != 0 ||
      result == nullptr) {
    throw NetError(NetErrc::kConnectFailed, "cannot resolve " + endpoint.host);
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(result->ai_addr)->sin_addr;
  freeaddrinfo(result);
  return addr;
}

}  // namespace

TcpStream::TcpStream(int fd) : fd_(fd) {
  int one = 1;
  ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpStream::~TcpStream() {
  if (fd_ >= 0) ::close(fd_);
}

void TcpStream::write_all(ByteSpan data) {
  if (fd_ < 0) throw NetError(NetErrc::kClosed, "write on closed stream");
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EPIPE || errno == ECONNRESET) {
        throw NetError(NetErrc::kClosed, "peer closed during write");
      }
      throw NetError(NetErrc::kIo, std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

void TcpStream::read_exact(MutableByteSpan out, Duration timeout) {
  if (fd_ < 0) throw NetError(NetErrc::kClosed, "read on closed stream");
  auto deadline = std::chrono::steady_clock::now() + timeout;
  std::size_t got = 0;
  while (got < out.size()) {
    auto left = std::chrono::duration_cast<Duration>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) throw NetError(NetErrc::kTimeout, "read timed out");
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, to_poll_ms(left));
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw NetError(NetErrc::kIo, std::strerror(errno));
    }
    if (rc == 0) continue;
    ssize_t n = ::recv(fd_, out.data() + got, out.size() - got, 0);
    if (n == 0) throw NetError(NetErrc::kClosed, "peer closed");
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      if (errno == ECONNRESET) throw NetError(NetErrc::kClosed, "connection reset");
      throw NetError(NetErrc::kIo, std::strerror(errno));
    }
    got += static_cast<std::size_t>(n);
  }
}

// Safe to call from another thread while a read is blocked: shutdown wakes
// the poller, and the descriptor itself is released by the destructor.
void TcpStream::close() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

std::unique_ptr<TcpStream> tcp_connect(const Endpoint& endpoint, Duration timeout) {
  sockaddr_in addr = resolve(endpoint);
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw NetError(NetErrc::kIo, std::strerror(errno));
  int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
  int rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  if (rc < 0 && errno != EINPROGRESS) {
    int err = errno;
    ::close(fd);
    throw NetError(NetErrc::kConnectFailed,
                   endpoint.to_string() + ": " + std::strerror(err));
  }
  if (rc < 0) {
    pollfd pfd{fd, POLLOUT, 0};
    rc = ::poll(&pfd, 1, to_poll_ms(timeout));
    if (rc <= 0) {
      ::close(fd);
      throw NetError(NetErrc::kTimeout, "connect to " + endpoint.to_string());
    }
    int err = 0;
    socklen_t len = sizeof(err);
    ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len);
    if (err != 0) {
      ::close(fd);
      throw NetError(NetErrc::kConnectFailed,
                     endpoint.to_string() + ": " + std::strerror(err));
    }
  }
  ::fcntl(fd, F_SETFL, flags);
  return std::make_unique<TcpStream>(fd);
}

TcpListener TcpListener::bind(const Endpoint& endpoint) {
  int fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (fd < 0) throw NetError(NetErrc::kIo, std::strerror(errno));
  int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = resolve(endpoint);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    int err = errno;
    ::close(fd);
    if (err == EADDRINUSE) {
      throw NetError(NetErrc::kPortInUse, endpoint.to_string());
    }
    throw NetError(NetErrc::kIo, std::strerror(err));
  }
  if (::listen(fd, 64) < 0) {
    int err = errno;
    ::close(fd);
    throw NetError(NetErrc::kIo, std::strerror(err));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  return TcpListener(fd, ntohs(addr.sin_port));
}

TcpListener::TcpListener(TcpListener&& other) noexcept
    : fd_(other.fd_), port_(other.port_) {
  other.fd_ = -1;
}

TcpListener& TcpListener::operator=(TcpListener&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.fd_;
    port_ = other.port_;
    other.fd_ = -1;
  }
  return *this;
}

TcpListener::~TcpListener() { close(); }

std::optional<std::unique_ptr<TcpStream>> TcpListener::accept(Duration timeout) {
  if (fd_ < 0) throw NetError(NetErrc::kClosed, "listener closed");
  pollfd pfd{fd_, POLLIN, 0};
  int rc = ::poll(&pfd, 1, to_poll_ms(timeout));
  if (rc <= 0) return std::nullopt;
  int client = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
  if (client < 0) return std::nullopt;
  return std::make_unique<TcpStream>(client);
}

void TcpListener::close() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

}  // namespace tzplc::net
