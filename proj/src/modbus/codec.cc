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

#include "tzplc/modbus/codec.h"

#include <algorithm>

namespace tzplc::modbus {

std::string_view to_string(ModbusErrc code) {
  switch (code) {
    case ModbusErrc::kMalformedPdu:
      return "MalformedPdu";
    case ModbusErrc::kTruncated:
      return "Truncated";
    case ModbusErrc::kBadProtocolId:
      return "BadProtocolId";
    case ModbusErrc::kLengthMismatch:
      return "LengthMismatch";
    case ModbusErrc::kUnknownFunction:
      return "UnknownFunction";
    case ModbusErrc::kTimeout:
      return "Timeout";
    case ModbusErrc::kTransactionMismatch:
      return "TransactionMismatch";
    case ModbusErrc::kExceptionResponse:
      return "ExceptionResponse";
  }
  return "ModbusError";
}

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw ModbusError(ModbusErrc::kMalformedPdu, what);
}

void check_range(std::uint16_t start, std::uint32_t quantity, std::uint32_t max,
                 const char* what) {
  if (quantity < 1 || quantity > max) {
    malformed(std::string(what) + " quantity " + std::to_string(quantity) +
              " outside 1.." + std::to_string(max));
  }
  if (static_cast<std::uint32_t>(start) + quantity > 0x10000u) {
    malformed(std::string(what) + " range exceeds address space");
  }
}

Pdu make(std::uint8_t function, std::uint16_t a, std::uint16_t b) {
  Pdu pdu{function, {}};
  put_u16(pdu.data, a);
  put_u16(pdu.data, b);
  return pdu;
}

}  // namespace

bool is_supported_function(std::uint8_t function) {
  switch (function & ~fc::kExceptionBit) {
    case fc::kReadCoils:
    case fc::kReadHoldingRegisters:
    case fc::kWriteSingleCoil:
    case fc::kWriteSingleRegister:
    case fc::kWriteMultipleCoils:
    case fc::kWriteMultipleRegisters:
      return true;
    default:
      return false;
  }
}

Bytes encode_frame(const MbapHeader& header, const Pdu& pdu) {
  if (pdu.data.size() > kMaxPduData) malformed("PDU exceeds 253 bytes");
  Bytes out;
  out.reserve(kMbapSize + 1 + pdu.data.size());
  put_u16(out, header.transaction_id);
  put_u16(out, 0);
  put_u16(out, static_cast<std::uint16_t>(2 + pdu.data.size()));
  out.push_back(header.unit_id);
  out.push_back(pdu.function);
  append(out, pdu.data);
  return out;
}

Bytes encode_request(const MbapHeader& header, const Pdu& pdu) {
  validate_request(pdu);
  return encode_frame(header, pdu);
}

Frame decode_frame(ByteSpan bytes) {
  if (bytes.size() < kMbapSize) {
    throw ModbusError(ModbusErrc::kTruncated, "frame shorter than MBAP header");
  }
  Frame frame;
  frame.header.transaction_id = get_u16(bytes, 0);
  frame.header.protocol_id = get_u16(bytes, 2);
  frame.header.length = get_u16(bytes, 4);
  frame.header.unit_id = bytes[6];
  if (frame.header.protocol_id != 0) {
    throw ModbusError(ModbusErrc::kBadProtocolId,
                      "protocol id " + std::to_string(frame.header.protocol_id));
  }
  if (frame.header.length < 2 || frame.header.length > kMaxPduData + 2) {
    throw ModbusError(ModbusErrc::kLengthMismatch,
                      "length field " + std::to_string(frame.header.length));
  }
  std::size_t following = bytes.size() - 6;
  if (following < frame.header.length) {
    throw ModbusError(ModbusErrc::kTruncated,
                      "declared " + std::to_string(frame.header.length) + " bytes, " +
                          std::to_string(following) + " present");
  }
  if (following > frame.header.length) {
    throw ModbusError(ModbusErrc::kLengthMismatch, "trailing bytes after frame");
  }
  frame.pdu.function = bytes[kMbapSize];
  if (!is_supported_function(frame.pdu.function)) {
    throw ModbusError(ModbusErrc::kUnknownFunction,
                      "function code " + std::to_string(frame.pdu.function));
  }
  frame.pdu.data.assign(bytes.begin() + kMbapSize + 1, bytes.end());
  return frame;
}

void validate_request(const Pdu& pdu) {
  const Bytes& d = pdu.data;
  switch (pdu.function) {
    case fc::kReadCoils:
    case fc::kReadHoldingRegisters: {
      if (d.size() != 4) malformed("read request must carry 4 bytes");
      bool coils = pdu.function == fc::kReadCoils;
      check_range(get_u16(d, 0), get_u16(d, 2), coils ? kMaxReadCoils : kMaxReadRegisters,
                  coils ? "read coils" : "read registers");
      return;
    }
    case fc::kWriteSingleCoil: {
      if (d.size() != 4) malformed("write single coil must carry 4 bytes");
      std::uint16_t v = get_u16(d, 2);
      if (v != 0xFF00 && v != 0x0000) malformed("coil value must be FF00 or 0000");
      return;
    }
    case fc::kWriteSingleRegister:
      if (d.size() != 4) malformed("write single register must carry 4 bytes");
      return;
    case fc::kWriteMultipleCoils:
    case fc::kWriteMultipleRegisters: {
      if (d.size() < 5) malformed("write multiple request too short");
      bool coils = pdu.function == fc::kWriteMultipleCoils;
      std::uint16_t qty = get_u16(d, 2);
      check_range(get_u16(d, 0), qty, coils ? kMaxWriteCoils : kMaxWriteRegisters,
                  coils ? "write coils" : "write registers");
      std::size_t expected = coils ? (qty + 7u) / 8u : 2u * qty;
      if (d[4] != expected || d.size() != 5 + expected) {
        malformed("byte count does not match quantity");
      }
      return;
    }
    default:
      throw ModbusError(ModbusErrc::kUnknownFunction,
                        "function code " + std::to_string(pdu.function));
  }
}

Pdu read_coils_request(std::uint16_t start, std::uint16_t quantity) {
  check_range(start, quantity, kMaxReadCoils, "read coils");
  return make(fc::kReadCoils, start, quantity);
}

Pdu read_holding_registers_request(std::uint16_t start, std::uint16_t quantity) {
  check_range(start, quantity, kMaxReadRegisters, "read registers");
  return make(fc::kReadHoldingRegisters, start, quantity);
}

Pdu write_single_coil_request(std::uint16_t address, bool value) {
  return make(fc::kWriteSingleCoil, address, value ? 0xFF00 : 0x0000);
}

Pdu write_single_register_request(std::uint16_t address, std::uint16_t value) {
  return make(fc::kWriteSingleRegister, address, value);
}

Pdu write_multiple_coils_request(std::uint16_t start, const std::vector<bool>& values) {
  check_range(start, static_cast<std::uint32_t>(values.size()), kMaxWriteCoils,
              "write coils");
  Pdu pdu = make(fc::kWriteMultipleCoils, start,
                 static_cast<std::uint16_t>(values.size()));
  Bytes packed = pack_bits(values);
  pdu.data.push_back(static_cast<std::uint8_t>(packed.size()));
  append(pdu.data, packed);
  return pdu;
}

Pdu write_multiple_registers_request(std::uint16_t start,
                                     const std::vector<std::uint16_t>& values) {
  check_range(start, static_cast<std::uint32_t>(values.size()), kMaxWriteRegisters,
              "write registers");
  Pdu pdu = make(fc::kWriteMultipleRegisters, start,
                 static_cast<std::uint16_t>(values.size()));
  pdu.data.push_back(static_cast<std::uint8_t>(values.size() * 2));
  for (std::uint16_t v : values) put_u16(pdu.data, v);
  return pdu;
}

Pdu exception_response(std::uint8_t function, std::uint8_t code) {
  return Pdu{static_cast<std::uint8_t>(function | fc::kExceptionBit), {code}};
}

namespace {

void throw_if_exception(const Pdu& pdu) {
  if (!pdu.is_exception()) return;
  std::uint8_t code = pdu.data.empty() ? 0 : pdu.data[0];
  throw ModbusError(ModbusErrc::kExceptionResponse,
                    "exception code " + std::to_string(code), code);
}

}  // namespace

std::vector<bool> parse_read_coils_response(const Pdu& pdu, std::uint16_t quantity) {
  throw_if_exception(pdu);
  std::size_t bytes = (quantity + 7u) / 8u;
  if (pdu.function != fc::kReadCoils || pdu.data.size() != bytes + 1 ||
      pdu.data[0] != bytes) {
    malformed("unexpected read coils response shape");
  }
  return unpack_bits(ByteSpan(pdu.data).subspan(1), quantity);
}

std::vector<std::uint16_t> parse_read_registers_response(const Pdu& pdu,
                                                         std::uint16_t quantity) {
  throw_if_exception(pdu);
  if (pdu.function != fc::kReadHoldingRegisters ||
      pdu.data.size() != 1 + 2u * quantity || pdu.data[0] != 2u * quantity) {
    malformed("unexpected read registers response shape");
  }
  std::vector<std::uint16_t> out(quantity);
  for (std::size_t i = 0; i < quantity; ++i) out[i] = get_u16(pdu.data, 1 + 2 * i);
  return out;
}

void check_write_response(const Pdu& request, const Pdu& response) {
  throw_if_exception(response);
  if (response.function != request.function || response.data.size() != 4 ||
      request.data.size() < 4 ||
      !std::equal(response.data.begin(), response.data.end(), request.data.begin())) {
    malformed("write response does not echo the request");
  }
}

Bytes pack_bits(const std::vector<bool>& bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

std::vector<bool> unpack_bits(ByteSpan packed, std::size_t count) {
  std::vector<bool> out(count);
  for (std::size_t i = 0; i < count && i / 8 < packed.size(); ++i) {
    out[i] = (packed[i / 8] >> (i % 8)) & 1u;
  }
  return out;
}

}  // namespace tzplc::modbus
