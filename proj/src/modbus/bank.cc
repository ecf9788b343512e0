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

#include "tzplc/modbus/bank.h"

namespace tzplc::modbus {

namespace {

void check(std::size_t size, std::uint16_t start, std::size_t count) {
  if (count == 0 || static_cast<std::size_t>(start) + count > size) {
    throw ModbusError(ModbusErrc::kExceptionResponse,
                      "address range " + std::to_string(start) + "+" +
                          std::to_string(count) + " outside bank of " +
                          std::to_string(size),
                      exc::kIllegalDataAddress);
  }
}

template <typename T>
std::vector<T> slice(const std::vector<T>& v, std::uint16_t start, std::uint16_t count) {
  check(v.size(), start, count);
  return std::vector<T>(v.begin() + start, v.begin() + start + count);
}

template <typename T>
void store(std::vector<T>& v, std::uint16_t start, const std::vector<T>& values) {
  check(v.size(), start, values.size());
  std::copy(values.begin(), values.end(), v.begin() + start);
}

}  // namespace

RegisterBank::RegisterBank(BankShape shape)
    : shape_(shape),
      coils_(shape.coils),
      discrete_(shape.discrete_inputs),
      holding_(shape.holding_registers),
      input_regs_(shape.input_registers) {}

std::vector<bool> RegisterBank::read_coils(std::uint16_t start, std::uint16_t count) const {
  return slice(coils_, start, count);
}
void RegisterBank::write_coils(std::uint16_t start, const std::vector<bool>& values) {
  store(coils_, start, values);
}
std::vector<bool> RegisterBank::read_discrete_inputs(std::uint16_t start,
                                                     std::uint16_t count) const {
  return slice(discrete_, start, count);
}
void RegisterBank::write_discrete_inputs(std::uint16_t start,
                                         const std::vector<bool>& values) {
  store(discrete_, start, values);
}
std::vector<std::uint16_t> RegisterBank::read_holding(std::uint16_t start,
                                                      std::uint16_t count) const {
  return slice(holding_, start, count);
}
void RegisterBank::write_holding(std::uint16_t start,
                                 const std::vector<std::uint16_t>& values) {
  store(holding_, start, values);
}
std::vector<std::uint16_t> RegisterBank::read_input_registers(std::uint16_t start,
                                                              std::uint16_t count) const {
  return slice(input_regs_, start, count);
}
void RegisterBank::write_input_registers(std::uint16_t start,
                                         const std::vector<std::uint16_t>& values) {
  store(input_regs_, start, values);
}

BankHandler::BankHandler(BankShape shape, Hooks hooks)
    : bank_(shape), hooks_(std::move(hooks)) {}

Pdu BankHandler::handle(std::uint8_t /*unit*/, const Pdu& request) {
  std::lock_guard lock(mu_);
  try {
    validate_request(request);
    return dispatch(request);
  } catch (const ModbusError& e) {
    switch (e.code()) {
      case ModbusErrc::kUnknownFunction:
        return exception_response(request.function, exc::kIllegalFunction);
      case ModbusErrc::kExceptionResponse:
        return exception_response(request.function, e.exception_code());
      default:
        return exception_response(request.function, exc::kIllegalDataValue);
    }
  }
}

Pdu BankHandler::dispatch(const Pdu& request) {
  const Bytes& d = request.data;
  std::uint16_t addr = get_u16(d, 0);
  std::uint16_t second = get_u16(d, 2);
  switch (request.function) {
    case fc::kReadCoils: {
      if (hooks_.before_read) hooks_.before_read(bank_, request);
      Bytes packed = pack_bits(bank_.read_coils(addr, second));
      Pdu out{fc::kReadCoils, {static_cast<std::uint8_t>(packed.size())}};
      append(out.data, packed);
      return out;
    }
    case fc::kReadHoldingRegisters: {
      if (hooks_.before_read) hooks_.before_read(bank_, request);
      auto regs = bank_.read_holding(addr, second);
      Pdu out{fc::kReadHoldingRegisters, {static_cast<std::uint8_t>(regs.size() * 2)}};
      for (std::uint16_t r : regs) put_u16(out.data, r);
      return out;
    }
    case fc::kWriteSingleCoil:
      bank_.write_coils(addr, {second == 0xFF00});
      break;
    case fc::kWriteSingleRegister:
      bank_.write_holding(addr, {second});
      break;
    case fc::kWriteMultipleCoils:
      bank_.write_coils(addr, unpack_bits(ByteSpan(d).subspan(5), second));
      break;
    case fc::kWriteMultipleRegisters: {
      std::vector<std::uint16_t> values(second);
      for (std::size_t i = 0; i < second; ++i) values[i] = get_u16(d, 5 + 2 * i);
      bank_.write_holding(addr, values);
      break;
    }
  }
  if (hooks_.after_write) hooks_.after_write(bank_, request);
  return Pdu{request.function, Bytes(d.begin(), d.begin() + 4)};
}

}  // namespace tzplc::modbus
