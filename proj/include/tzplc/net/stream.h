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

#ifndef TZPLC_NET_STREAM_H_
#define TZPLC_NET_STREAM_H_

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "tzplc/common/bytes.h"
#include "tzplc/common/clock.h"
#include "tzplc/common/error.h"

namespace tzplc::net {

enum class NetErrc {
  kTimeout,
  kClosed,
  kConnectFailed,
  kPortInUse,
  kIo,
};

constexpr std::string_view module_name(NetErrc) { return "net"; }
std::string_view to_string(NetErrc code);

using NetError = CodedError<NetErrc>;

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  std::string to_string() const { return host + ":" + std::to_string(port); }
  bool operator==(const Endpoint&) const = default;
};

// Reliable, ordered byte channel. One `write_all` call carries one protocol
// message (Modbus frame, handshake message or record); framed taps rely on
// that to intercept whole messages.
class ByteStream {
 public:
  virtual ~ByteStream() = default;

  virtual void write_all(ByteSpan data) = 0;
  // Fills `out` completely or throws kTimeout / kClosed.
  virtual void read_exact(MutableByteSpan out, Duration timeout) = 0;
  virtual void close() = 0;
};

// Opens client connections. Implementations decide how the bytes travel
// (direct TCP, or through the normal world's network stack with taps).
class Connector {
 public:
  virtual ~Connector() = default;
  virtual std::unique_ptr<ByteStream> connect(const Endpoint& endpoint,
                                              Duration timeout) = 0;
};

}  // namespace tzplc::net

#endif  // TZPLC_NET_STREAM_H_
