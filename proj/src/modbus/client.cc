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

#include "tzplc/modbus/client.h"

namespace tzplc::modbus {

Client::Client(net::ByteStream& stream, ClientOptions options)
    : stream_(&stream), options_(options) {}

Pdu Client::transact(const Pdu& request) {
  MbapHeader header{next_transaction_++, 0, 0, options_.unit};
  Bytes frame = encode_request(header, request);
  PhaseRecorder* recorder =
      options_.instrumentation != nullptr ? options_.instrumentation->recorder : nullptr;
  Bytes reply(kMbapSize);
  try {
    ScopedPhase wait(recorder, Phase::kNetworkWait);
    stream_->write_all(frame);
    stream_->read_exact(reply, options_.timeout);
    std::uint16_t length = get_u16(reply, 4);
    if (get_u16(reply, 2) != 0) {
      throw ModbusError(ModbusErrc::kBadProtocolId, "response protocol id");
    }
    if (length < 2 || length > kMaxPduData + 2) {
      throw ModbusError(ModbusErrc::kLengthMismatch, "response length field");
    }
    reply.resize(6 + length);
    stream_->read_exact(MutableByteSpan(reply).subspan(kMbapSize), options_.timeout);
  } catch (const net::NetError& e) {
    if (e.code() == net::NetErrc::kTimeout) {
      throw ModbusError(ModbusErrc::kTimeout, e.what());
    }
    throw;
  }
  Frame response = decode_frame(reply);
  if (options_.instrumentation != nullptr) {
    options_.instrumentation->charge_transaction(options_.secure_socket);
  }
  if (response.header.transaction_id != header.transaction_id) {
    throw ModbusError(ModbusErrc::kTransactionMismatch,
                      "expected " + std::to_string(header.transaction_id) + ", got " +
                          std::to_string(response.header.transaction_id));
  }
  if ((response.pdu.function & ~fc::kExceptionBit) != request.function) {
    throw ModbusError(ModbusErrc::kMalformedPdu, "response function mismatch");
  }
  return response.pdu;
}

std::vector<bool> Client::read_coils(std::uint16_t start, std::uint16_t quantity) {
  return parse_read_coils_response(transact(read_coils_request(start, quantity)),
                                   quantity);
}

std::vector<std::uint16_t> Client::read_holding_registers(std::uint16_t start,
                                                          std::uint16_t quantity) {
  return parse_read_registers_response(
      transact(read_holding_registers_request(start, quantity)), quantity);
}

void Client::write_single_coil(std::uint16_t address, bool value) {
  Pdu request = write_single_coil_request(address, value);
  check_write_response(request, transact(request));
}

void Client::write_single_register(std::uint16_t address, std::uint16_t value) {
  Pdu request = write_single_register_request(address, value);
  check_write_response(request, transact(request));
}

void Client::write_multiple_coils(std::uint16_t start, const std::vector<bool>& values) {
  Pdu request = write_multiple_coils_request(start, values);
  check_write_response(request, transact(request));
}

void Client::write_multiple_registers(std::uint16_t start,
                                      const std::vector<std::uint16_t>& values) {
  Pdu request = write_multiple_registers_request(start, values);
  check_write_response(request, transact(request));
}

}  // namespace tzplc::modbus
