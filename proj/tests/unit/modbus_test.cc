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

#include <gtest/gtest.h>

#include <chrono>
#include <thread>

#include "tzplc/modbus/bank.h"
#include "tzplc/modbus/client.h"
#include "tzplc/modbus/codec.h"
#include "tzplc/modbus/server.h"
#include "tzplc/net/tcp.h"
#include "tzplc/common/rng.h"

namespace tzplc::modbus {
namespace {

using namespace std::chrono_literals;

// Hand-rolled reference encoder, written straight from the Modbus
// Application Protocol framing rules.
Bytes reference_frame(std::uint16_t txn, std::uint8_t unit, std::uint8_t fn,
                      const Bytes& data) {
  std::size_t len = 2 + data.size();
  Bytes out = {static_cast<std::uint8_t>(txn >> 8), static_cast<std::uint8_t>(txn), 0, 0,
               static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len), unit,
               fn};
  for (std::uint8_t b : data) out.push_back(b);
  return out;
}

Bytes reference_pack(const std::vector<bool>& bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return out;
}

TEST(Codec, ReadCoilsGoldenBytes) {
  Bytes got = encode_request({1, 0, 0, 1}, read_coils_request(0, 8));
  EXPECT_EQ(from_hex("000100000006010100000008"), got);
  EXPECT_EQ(reference_frame(1, 1, 0x01, {0, 0, 0, 8}), got);
}

TEST(Codec, WriteSingleCoilGoldenBytes) {
  Bytes got = encode_request({0, 0, 0, 1}, write_single_coil_request(0, true));
  EXPECT_EQ(from_hex("00000000000601050000FF00"), got);
}

TEST(Codec, LengthFieldIsComputed) {
  MbapHeader h{7, 0, 999, 3};
  Frame f = decode_frame(encode_request(h, read_coils_request(4, 2)));
  EXPECT_EQ(6, f.header.length);
}

TEST(Codec, ZeroQuantityIsMalformed) {
  try {
    read_coils_request(0, 0);
    FAIL();
  } catch (const ModbusError& e) {
    EXPECT_EQ(ModbusErrc::kMalformedPdu, e.code());
  }
  EXPECT_THROW(read_coils_request(0, 2001), ModbusError);
  EXPECT_THROW(read_holding_registers_request(0, 126), ModbusError);
  EXPECT_NO_THROW(read_coils_request(0, 2000));
  EXPECT_NO_THROW(read_holding_registers_request(0, 125));
}

ModbusErrc decode_error(const Bytes& b) {
  try {
    decode_frame(b);
  } catch (const ModbusError& e) {
    return e.code();
  }
  ADD_FAILURE() << "decoded without error";
  return ModbusErrc::kMalformedPdu;
}

TEST(Codec, DecodeErrors) {
  Bytes good = from_hex("000100000006010100000008");
  Bytes bad_proto = good;
  bad_proto[3] = 1;
  EXPECT_EQ(ModbusErrc::kBadProtocolId, decode_error(bad_proto));
  Bytes truncated(good.begin(), good.end() - 2);
  EXPECT_EQ(ModbusErrc::kTruncated, decode_error(truncated));
  EXPECT_EQ(ModbusErrc::kTruncated, decode_error(Bytes(good.begin(), good.begin() + 5)));
  Bytes trailing = good;
  trailing.push_back(0);
  EXPECT_EQ(ModbusErrc::kLengthMismatch, decode_error(trailing));
  EXPECT_EQ(ModbusErrc::kUnknownFunction,
            decode_error(reference_frame(1, 1, 0x2B, {0x0E, 0x01, 0x00})));
}

TEST(Codec, RoundTripsDecodedFrame) {
  Frame f = decode_frame(from_hex("000100000006010100000008"));
  EXPECT_EQ(1, f.header.transaction_id);
  EXPECT_EQ(1, f.header.unit_id);
  EXPECT_EQ(read_coils_request(0, 8), f.pdu);
}

TEST(Codec, PackingMatchesReference) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = rng() % 2001;
    std::vector<bool> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = rng() & 1;
    Bytes packed = pack_bits(bits);
    ASSERT_EQ(reference_pack(bits), packed);
    ASSERT_EQ(bits, unpack_bits(packed, n));
  }
}

TEST(Codec, ExceptionResponseParses) {
  Pdu e = exception_response(fc::kReadCoils, exc::kIllegalDataAddress);
  EXPECT_EQ(0x81, e.function);
  try {
    parse_read_coils_response(e, 1);
    FAIL();
  } catch (const ModbusError& err) {
    EXPECT_EQ(ModbusErrc::kExceptionResponse, err.code());
    EXPECT_EQ(exc::kIllegalDataAddress, err.exception_code());
  }
}

TEST(Bank, BoundsChecked) {
  RegisterBank bank({8, 8, 4, 4});
  EXPECT_NO_THROW(bank.read_coils(0, 8));
  EXPECT_THROW(bank.read_coils(1, 8), ModbusError);
  EXPECT_THROW(bank.write_holding(4, {1}), ModbusError);
}

class ServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    handler_ = std::make_shared<BankHandler>(BankShape{16, 0, 8, 0});
    ServerOptions options;
    options.bind = {"127.0.0.1", 0};
    server_ = Server::start(handler_, options);
  }

  std::unique_ptr<net::TcpStream> connect() {
    return net::tcp_connect(server_->endpoint(), 1s);
  }

  std::shared_ptr<BankHandler> handler_;
  std::unique_ptr<Server> server_;
};

TEST_F(ServerTest, WriteThenRead) {
  auto s = connect();
  Client c(*s, {});
  c.write_multiple_coils(0, {true, true, false});
  EXPECT_EQ((std::vector<bool>{true, true, false}), c.read_coils(0, 3));
  c.write_single_register(2, 0xBEEF);
  EXPECT_EQ(0xBEEF, c.read_holding_registers(2, 1)[0]);
  c.write_multiple_registers(0, {1, 2});
  EXPECT_EQ((std::vector<std::uint16_t>{1, 2, 0xBEEF}), c.read_holding_registers(0, 3));
  EXPECT_EQ(7, c.next_transaction_id());
}

TEST_F(ServerTest, KnownStateEcho) {
  handler_->with_bank([](RegisterBank& b) { b.write_coils(0, {true, false}); });
  auto s = connect();
  Client c(*s, {});
  EXPECT_EQ((std::vector<bool>{true, false}), c.read_coils(0, 2));
}

TEST_F(ServerTest, OutOfRangeIsIllegalAddress) {
  auto s = connect();
  Client c(*s, {});
  try {
    c.read_coils(10, 8);
    FAIL();
  } catch (const ModbusError& e) {
    EXPECT_EQ(ModbusErrc::kExceptionResponse, e.code());
    EXPECT_EQ(exc::kIllegalDataAddress, e.exception_code());
  }
}

TEST_F(ServerTest, UnknownFunctionIsIllegalFunction) {
  auto s = connect();
  s->write_all(reference_frame(9, 1, 0x2B, {0x0E, 0x01, 0x00}));
  Bytes reply(9);
  s->read_exact(reply, 1s);
  EXPECT_EQ(reference_frame(9, 1, 0xAB, {0x01}), reply);
}

TEST_F(ServerTest, InterleavedClientsKeepTheirTransactions) {
  auto a = connect();
  auto b = connect();
  Client ca(*a, {});
  Client cb(*b, {});
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Client& c = (rng() & 1) ? ca : cb;
    std::uint16_t addr = static_cast<std::uint16_t>(rng() % 8);
    std::uint16_t v = static_cast<std::uint16_t>(rng());
    c.write_single_register(addr, v);
    ASSERT_EQ(v, c.read_holding_registers(addr, 1)[0]);
  }
}

TEST_F(ServerTest, BadClientDoesNotStopServer) {
  {
    auto junk = connect();
    junk->write_all(from_hex("00010007000601"));
  }
  auto s = connect();
  Client c(*s, {});
  EXPECT_NO_THROW(c.read_coils(0, 1));
}

TEST(Client, TimesOutAgainstSilentPeer) {
  auto listener = net::TcpListener::bind({"127.0.0.1", 0});
  auto s = net::tcp_connect({"127.0.0.1", listener.port()}, 1s);
  Client c(*s, {.timeout = 100ms});
  auto t0 = std::chrono::steady_clock::now();
  try {
    c.read_coils(0, 1);
    FAIL();
  } catch (const ModbusError& e) {
    EXPECT_EQ(ModbusErrc::kTimeout, e.code());
  }
  EXPECT_GE(std::chrono::steady_clock::now() - t0, 100ms);
}

TEST(Client, ResponseDelayShowsInRoundTrip) {
  auto handler = std::make_shared<BankHandler>(BankShape{8, 0, 0, 0});
  ServerOptions options;
  options.bind = {"127.0.0.1", 0};
  options.request_delay = 600us;
  options.response_delay = 600us;
  auto server = Server::start(handler, options);
  auto s = net::tcp_connect(server->endpoint(), 1s);
  Client c(*s, {});
  auto t0 = std::chrono::steady_clock::now();
  c.read_coils(0, 1);
  EXPECT_GE(std::chrono::steady_clock::now() - t0, 1200us);
}

TEST(Server, PortInUse) {
  auto listener = net::TcpListener::bind({"127.0.0.1", 0});
  auto handler = std::make_shared<BankHandler>(BankShape{8, 0, 0, 0});
  try {
    ServerOptions options;
    options.bind = {"127.0.0.1", listener.port()};
    Server::start(handler, options);
    FAIL();
  } catch (const net::NetError& e) {
    EXPECT_EQ(net::NetErrc::kPortInUse, e.code());
  }
}

}  // namespace
}  // namespace tzplc::modbus
