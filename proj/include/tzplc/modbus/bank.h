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

#ifndef TZPLC_MODBUS_BANK_H_
#define TZPLC_MODBUS_BANK_H_

#include <cstdint>
#include <functional>
#include <mutex>
#include <vector>

#include "tzplc/modbus/codec.h"

namespace tzplc::modbus {

struct BankShape {
  std::uint16_t coils = 0;
  std::uint16_t discrete_inputs = 0;
  std::uint16_t holding_registers = 0;
  std::uint16_t input_registers = 0;
};

// Server-side data model. Out-of-range accesses throw kExceptionResponse
// carrying exc::kIllegalDataAddress so handlers can answer directly.
class RegisterBank {
 public:
  explicit RegisterBank(BankShape shape);

  const BankShape& shape() const { return shape_; }

  std::vector<bool> read_coils(std::uint16_t start, std::uint16_t count) const;
  void write_coils(std::uint16_t start, const std::vector<bool>& values);
  std::vector<bool> read_discrete_inputs(std::uint16_t start, std::uint16_t count) const;
  void write_discrete_inputs(std::uint16_t start, const std::vector<bool>& values);
  std::vector<std::uint16_t> read_holding(std::uint16_t start, std::uint16_t count) const;
  void write_holding(std::uint16_t start, const std::vector<std::uint16_t>& values);
  std::vector<std::uint16_t> read_input_registers(std::uint16_t start,
                                                  std::uint16_t count) const;
  void write_input_registers(std::uint16_t start,
                             const std::vector<std::uint16_t>& values);

  bool coil(std::uint16_t address) const { return read_coils(address, 1)[0]; }
  std::uint16_t holding(std::uint16_t address) const {
    return read_holding(address, 1)[0];
  }

 private:
  BankShape shape_;
  std::vector<bool> coils_;
  std::vector<bool> discrete_;
  std::vector<std::uint16_t> holding_;
  std::vector<std::uint16_t> input_regs_;
};

// Answers one request PDU. Implementations must not throw for protocol
// errors; they return exception PDUs instead.
class RequestHandler {
 public:
  virtual ~RequestHandler() = default;
  virtual Pdu handle(std::uint8_t unit, const Pdu& request) = 0;
};

// Serves the six supported function codes from a RegisterBank. All calls,
// hooks included, run under one mutex, so writes are totally ordered.
class BankHandler final : public RequestHandler {
 public:
  struct Hooks {
    // Before a read is served; may refresh the bank from a process model.
    std::function<void(RegisterBank&, const Pdu& request)> before_read;
    // After a write was applied, before the response is sent.
    std::function<void(RegisterBank&, const Pdu& request)> after_write;
  };

  explicit BankHandler(BankShape shape, Hooks hooks = {});

  Pdu handle(std::uint8_t unit, const Pdu& request) override;

  // Direct access for process models, under the handler's lock.
  template <typename Fn>
  auto with_bank(Fn&& fn) {
    std::lock_guard lock(mu_);
    return fn(bank_);
  }

 private:
  Pdu dispatch(const Pdu& request);

  std::mutex mu_;
  RegisterBank bank_;
  Hooks hooks_;
};

}  // namespace tzplc::modbus

#endif  // TZPLC_MODBUS_BANK_H_
