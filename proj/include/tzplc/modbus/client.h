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

#ifndef TZPLC_MODBUS_CLIENT_H_
#define TZPLC_MODBUS_CLIENT_H_

#include <chrono>
#include <cstdint>
#include <vector>

#include "tzplc/common/cycle_report.h"
#include "tzplc/modbus/codec.h"
#include "tzplc/net/stream.h"

namespace tzplc::modbus {

inline constexpr Duration kDefaultTimeout = std::chrono::milliseconds(500);

struct ClientOptions {
  std::uint8_t unit = 1;
  Duration timeout = kDefaultTimeout;
  // Optional phase accounting; the exchange is timed as network wait.
  Instrumentation* instrumentation = nullptr;
  // The link is a secure-world socket (adds its forwarding cost on a
  // virtual clock).
  bool secure_socket = false;
};

// Strict request/response client over any byte stream: one outstanding
// request, transaction ids incrementing per request. Not shareable between
// concurrent callers.
class Client {
 public:
  Client(net::ByteStream& stream, ClientOptions options);

  // Sends `request` and returns the matching response PDU. Exception
  // responses are returned as-is; use the typed helpers to get them thrown.
  Pdu transact(const Pdu& request);

  std::vector<bool> read_coils(std::uint16_t start, std::uint16_t quantity);
  std::vector<std::uint16_t> read_holding_registers(std::uint16_t start,
                                                    std::uint16_t quantity);
  void write_single_coil(std::uint16_t address, bool value);
  void write_single_register(std::uint16_t address, std::uint16_t value);
  void write_multiple_coils(std::uint16_t start, const std::vector<bool>& values);
  void write_multiple_registers(std::uint16_t start,
                                const std::vector<std::uint16_t>& values);

  std::uint16_t next_transaction_id() const { return next_transaction_; }

 private:
  net::ByteStream* stream_;
  ClientOptions options_;
  std::uint16_t next_transaction_ = 1;
};

}  // namespace tzplc::modbus

#endif  // TZPLC_MODBUS_CLIENT_H_
