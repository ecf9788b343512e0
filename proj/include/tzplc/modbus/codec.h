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

#ifndef TZPLC_MODBUS_CODEC_H_
#define TZPLC_MODBUS_CODEC_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tzplc/common/bytes.h"
#include "tzplc/common/error.h"

namespace tzplc::modbus {

enum class ModbusErrc {
  kMalformedPdu,
  kTruncated,
  kBadProtocolId,
  kLengthMismatch,
  kUnknownFunction,
  kTimeout,
  kTransactionMismatch,
  kExceptionResponse,
};

constexpr std::string_view module_name(ModbusErrc) { return "modbus"; }
std::string_view to_string(ModbusErrc code);

class ModbusError : public CodedError<ModbusErrc> {
 public:
  ModbusError(ModbusErrc code, const std::string& what,
              std::uint8_t exception_code = 0)
      : CodedError(code, what), exception_code_(exception_code) {}

  // Only meaningful for kExceptionResponse.
  std::uint8_t exception_code() const noexcept { return exception_code_; }

 private:
  std::uint8_t exception_code_;
};

namespace fc {
inline constexpr std::uint8_t kReadCoils = 0x01;
inline constexpr std::uint8_t kReadHoldingRegisters = 0x03;
inline constexpr std::uint8_t kWriteSingleCoil = 0x05;
inline constexpr std::uint8_t kWriteSingleRegister = 0x06;
inline constexpr std::uint8_t kWriteMultipleCoils = 0x0F;
inline constexpr std::uint8_t kWriteMultipleRegisters = 0x10;
inline constexpr std::uint8_t kExceptionBit = 0x80;
}  // namespace fc

namespace exc {
inline constexpr std::uint8_t kIllegalFunction = 0x01;
inline constexpr std::uint8_t kIllegalDataAddress = 0x02;
inline constexpr std::uint8_t kIllegalDataValue = 0x03;
inline constexpr std::uint8_t kServerDeviceFailure = 0x04;
}  // namespace exc

inline constexpr std::size_t kMbapSize = 7;
inline constexpr std::size_t kMaxPduData = 252;
inline constexpr std::uint16_t kMaxReadCoils = 2000;
inline constexpr std::uint16_t kMaxReadRegisters = 125;
inline constexpr std::uint16_t kMaxWriteCoils = 1968;
inline constexpr std::uint16_t kMaxWriteRegisters = 123;

struct MbapHeader {
  std::uint16_t transaction_id = 0;
  std::uint16_t protocol_id = 0;
  // Bytes following the length field, unit id included. Computed on encode.
  std::uint16_t length = 0;
  std::uint8_t unit_id = 0;

  bool operator==(const MbapHeader&) const = default;
};

struct Pdu {
  std::uint8_t function = 0;
  Bytes data;

  bool is_exception() const { return (function & fc::kExceptionBit) != 0; }
  bool operator==(const Pdu&) const = default;
};

struct Frame {
  MbapHeader header;
  Pdu pdu;

  bool operator==(const Frame&) const = default;
};

bool is_supported_function(std::uint8_t function);

// Generic frame encoding; the length field is derived from the PDU.
Bytes encode_frame(const MbapHeader& header, const Pdu& pdu);
// Validates the PDU as a request first (MalformedPdu / UnknownFunction).
Bytes encode_request(const MbapHeader& header, const Pdu& pdu);
// Strict decoding of exactly one frame.
Frame decode_frame(ByteSpan bytes);

// Structural checks of a request PDU. Throws kMalformedPdu or
// kUnknownFunction.
void validate_request(const Pdu& pdu);

// Request builders (validating).
Pdu read_coils_request(std::uint16_t start, std::uint16_t quantity);
Pdu read_holding_registers_request(std::uint16_t start, std::uint16_t quantity);
Pdu write_single_coil_request(std::uint16_t address, bool value);
Pdu write_single_register_request(std::uint16_t address, std::uint16_t value);
Pdu write_multiple_coils_request(std::uint16_t start, const std::vector<bool>& values);
Pdu write_multiple_registers_request(std::uint16_t start,
                                     const std::vector<std::uint16_t>& values);

Pdu exception_response(std::uint8_t function, std::uint8_t code);

// Response decoders. Throw kExceptionResponse for exception PDUs and
// kMalformedPdu for shape errors.
std::vector<bool> parse_read_coils_response(const Pdu& pdu, std::uint16_t quantity);
std::vector<std::uint16_t> parse_read_registers_response(const Pdu& pdu,
                                                         std::uint16_t quantity);
void check_write_response(const Pdu& request, const Pdu& response);

// 8 coils per byte, least significant bit first.
Bytes pack_bits(const std::vector<bool>& bits);
std::vector<bool> unpack_bits(ByteSpan packed, std::size_t count);

}  // namespace tzplc::modbus

#endif  // TZPLC_MODBUS_CODEC_H_
