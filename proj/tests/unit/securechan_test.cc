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
#include <future>
#include <thread>

#include "tzplc/common/rng.h"
#include "tzplc/modbus/client.h"
#include "tzplc/modbus/server.h"
#include "tzplc/net/pipe.h"
#include "tzplc/net/tap.h"
#include "tzplc/net/tcp.h"
#include "tzplc/securechan/channel.h"

namespace tzplc::securechan {
namespace {

using namespace std::chrono_literals;

struct Pair {
  SecureSession initiator;
  SecureSession responder;
};

struct Parties {
  PeerIdentity plc;
  PeerIdentity slave;
  PeerIdentity stranger;
  TrustSet plc_trusts;
  TrustSet slave_trusts;

  explicit Parties(std::uint64_t seed) {
    Rng rng(seed);
    plc = generate_identity("plc", rng);
    slave = generate_identity("slave", rng);
    stranger = generate_identity("stranger", rng);
    plc_trusts.add(slave);
    slave_trusts.add(plc);
  }
};

// Runs both sides of a handshake over `a`/`b`; returns each side's outcome.
template <typename A, typename B>
auto run_both(A initiator, B responder) {
  auto r = std::async(std::launch::async, responder);
  auto i = initiator();
  return std::make_pair(std::move(i), r.get());
}

Pair honest_pair(const Parties& p) {
  auto [a, b] = net::make_pipe();
  auto [i, r] = run_both(
      [&, a = a.get()] { return handshake(*a, p.plc, p.plc_trusts, Role::kInitiator, 1s); },
      [&, b = b.get()] {
        return handshake(*b, p.slave, p.slave_trusts, Role::kResponder, 1s);
      });
  return {std::move(i), std::move(r)};
}

TEST(Identity, SeedDeterminesPublicKey) {
  Bytes seed(32, 7);
  EXPECT_EQ(identity_from_seed("a", seed).public_key,
            identity_from_seed("b", seed).public_key);
  EXPECT_THROW(identity_from_seed("x", Bytes(31)), ChanError);
}

TEST(Handshake, HonestPeersAgree) {
  Parties p(1);
  Pair s = honest_pair(p);
  EXPECT_EQ(p.slave.public_key, s.initiator.peer().public_key);
  EXPECT_EQ(p.plc.public_key, s.responder.peer().public_key);
  Bytes rec = s.initiator.seal(to_bytes("PING"));
  EXPECT_EQ(to_bytes("PING"), s.responder.open(rec));
  Bytes back = s.responder.seal(to_bytes("PONG"));
  EXPECT_EQ(to_bytes("PONG"), s.initiator.open(back));
}

TEST(Handshake, UntrustedResponderRejected) {
  Parties p(2);
  auto [a, b] = net::make_pipe();
  auto fut = std::async(std::launch::async, [&, b = b.get()] {
    try {
      handshake(*b, p.stranger, p.slave_trusts, Role::kResponder, 1s);
    } catch (const ChanError&) {
    }
  });
  try {
    handshake(*a, p.plc, p.plc_trusts, Role::kInitiator, 1s);
    FAIL();
  } catch (const ChanError& e) {
    EXPECT_EQ(ChanErrc::kPeerNotTrusted, e.code());
  }
  a->close();
  fut.get();
}

TEST(Handshake, UntrustedInitiatorRejected) {
  Parties p(3);
  auto [a, b] = net::make_pipe();
  auto fut = std::async(std::launch::async, [&, a = a.get()] {
    try {
      handshake(*a, p.stranger, p.plc_trusts, Role::kInitiator, 1s);
    } catch (const ChanError&) {
    }
  });
  try {
    handshake(*b, p.slave, p.slave_trusts, Role::kResponder, 1s);
    FAIL();
  } catch (const ChanError& e) {
    EXPECT_EQ(ChanErrc::kPeerNotTrusted, e.code());
  }
  fut.get();
}

// Flips one byte of the handshake in transit at every position of every
// message; at least one side must report HandshakeTampered.
TEST(Handshake, AnyFlippedByteIsDetected) {
  Parties p(4);
  const std::size_t sizes[] = {4 + 97, 4 + 161, 4 + 65};
  Rng rng(99);
  for (std::uint64_t msg = 0; msg < 3; ++msg) {
    for (std::size_t pos = 0; pos < sizes[msg]; ++pos) {
      auto [a, b] = net::make_pipe();
      std::uint8_t mask = static_cast<std::uint8_t>(1u << (rng() % 8));
      net::FrameMutator flip = [&](const std::string&, net::Direction dir,
                                   std::uint64_t idx, Bytes& frame) {
        // Messages 0 and 2 travel to the responder, message 1 back.
        bool to_server = dir == net::Direction::kToServer;
        std::uint64_t which = to_server ? idx * 2 : 1;
        if (which == msg && (!to_server || idx * 2 == msg)) frame[pos] ^= mask;
      };
      auto tapped = std::make_unique<net::TappedStream>(
          std::move(a), "hs", net::Framing::kLengthPrefixed, flip,
          std::make_shared<net::CaptureLog>());
      std::optional<ChanErrc> init_err, resp_err;
      auto fut = std::async(std::launch::async, [&, b = b.get()] {
        try {
          handshake(*b, p.slave, p.slave_trusts, Role::kResponder, 200ms);
        } catch (const ChanError& e) {
          resp_err = e.code();
          b->close();
        }
      });
      try {
        handshake(*tapped, p.plc, p.plc_trusts, Role::kInitiator, 200ms);
      } catch (const ChanError& e) {
        init_err = e.code();
        tapped->close();
      }
      fut.get();
      bool detected = init_err == ChanErrc::kHandshakeTampered ||
                      resp_err == ChanErrc::kHandshakeTampered;
      ASSERT_TRUE(detected) << "message " << msg << " byte " << pos;
    }
  }
}

TEST(Record, SealOpenRoundTrip) {
  Parties p(5);
  Pair s = honest_pair(p);
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Bytes msg(rng() % 300);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    ASSERT_EQ(msg, s.responder.open(s.initiator.seal(msg)));
  }
}

TEST(Record, IdenticalPlaintextsGiveDistinctRecords) {
  Parties p(6);
  Pair s = honest_pair(p);
  Bytes a = s.initiator.seal(to_bytes("same"));
  Bytes b = s.initiator.seal(to_bytes("same"));
  EXPECT_NE(a, b);
  EXPECT_NE(Bytes(a.begin() + 12, a.end()), Bytes(b.begin() + 12, b.end()));
}

TEST(Record, CiphertextHidesPlaintext) {
  Parties p(7);
  Pair s = honest_pair(p);
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    Bytes msg(8 + rng() % 64);
    for (auto& b : msg) b = static_cast<std::uint8_t>(rng());
    ASSERT_FALSE(contains_subsequence(s.initiator.seal(msg), msg));
  }
}

TEST(Record, LayoutIsLengthSequenceCiphertext) {
  Parties p(8);
  Pair s = honest_pair(p);
  Bytes rec = s.initiator.seal(Bytes(10, 0xAA));
  ASSERT_EQ(4u + 8 + 10 + kTagSize, rec.size());
  EXPECT_EQ(rec.size() - 4, get_u32(rec, 0));
  EXPECT_EQ(1u, get_u64(rec, 4));
  EXPECT_EQ(2u, get_u64(s.initiator.seal({}), 4));
}

TEST(Record, ReplayRejected) {
  Parties p(9);
  Pair s = honest_pair(p);
  Bytes r1 = s.initiator.seal(to_bytes("1"));
  Bytes r2 = s.initiator.seal(to_bytes("2"));
  s.responder.open(r1);
  s.responder.open(r2);
  try {
    s.responder.open(r1);
    FAIL();
  } catch (const ChanError& e) {
    EXPECT_EQ(ChanErrc::kReplay, e.code());
  }
}

TEST(Record, FlippedBitFailsAuth) {
  Parties p(10);
  Pair s = honest_pair(p);
  Bytes rec = s.initiator.seal(to_bytes("payload"));
  rec[20] ^= 0x01;
  try {
    s.responder.open(rec);
    FAIL();
  } catch (const ChanError& e) {
    EXPECT_EQ(ChanErrc::kAuthFailed, e.code());
  }
}

TEST(Record, ShortRecordTruncated) {
  Parties p(11);
  Pair s = honest_pair(p);
  try {
    s.responder.open(Bytes(20));
    FAIL();
  } catch (const ChanError& e) {
    EXPECT_EQ(ChanErrc::kTruncated, e.code());
  }
}

TEST(Record, SequenceExhaustion) {
  SessionKeys keys;
  SecureSession s(keys, {}, UINT64_MAX - 1);
  EXPECT_NO_THROW(s.seal(to_bytes("last")));
  try {
    s.seal(to_bytes("over"));
    FAIL();
  } catch (const ChanError& e) {
    EXPECT_EQ(ChanErrc::kSequenceExhausted, e.code());
  }
}

TEST(Stream, ModbusOverSecureChannel) {
  Parties p(12);
  auto handler = std::make_shared<modbus::BankHandler>(modbus::BankShape{8, 0, 4, 0});
  modbus::ServerOptions options;
  options.bind = {"127.0.0.1", 0};
  options.wrap = responder_wrapper(p.slave, p.slave_trusts, 1s);
  auto server = modbus::Server::start(handler, options);
  auto stream = connect_secure(net::tcp_connect(server->endpoint(), 1s), p.plc,
                               p.plc_trusts, 1s);
  modbus::Client c(*stream, {});
  c.write_multiple_coils(0, {true, false, true});
  EXPECT_EQ((std::vector<bool>{true, false, true}), c.read_coils(0, 3));
  EXPECT_EQ(2u, stream->session().send_seq());
}

TEST(Stream, CryptoPhaseCharged) {
  Parties p(13);
  auto [a, b] = net::make_pipe();
  auto [i, r] = run_both(
      [&, a = a.get()] { return handshake(*a, p.plc, p.plc_trusts, Role::kInitiator, 1s); },
      [&, b = b.get()] {
        return handshake(*b, p.slave, p.slave_trusts, Role::kResponder, 1s);
      });
  VirtualClock clock;
  PhaseRecorder rec(clock);
  Instrumentation instr{&clock, &rec, {}};
  SecureStream client(std::move(a), std::move(i), &instr);
  SecureStream server(std::move(b), std::move(r));
  client.write_all(to_bytes("abc"));
  Bytes got(3);
  server.read_exact(got, 1s);
  server.write_all(to_bytes("xyz"));
  client.read_exact(got, 1s);
  EXPECT_EQ(to_bytes("xyz"), got);
  EXPECT_EQ(instr.latency.encrypt_cost + instr.latency.decrypt_cost,
            rec.times()[static_cast<std::size_t>(Phase::kChannelCrypto)]);
  EXPECT_EQ(clock.now(), instr.latency.encrypt_cost + instr.latency.decrypt_cost);
}

}  // namespace
}  // namespace tzplc::securechan
