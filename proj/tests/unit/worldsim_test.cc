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

#include <openssl/evp.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "tzplc/common/rng.h"
#include "tzplc/worldsim/world.h"

namespace tzplc::worldsim {
namespace {

using namespace std::chrono_literals;

// Independent Ed25519 verifier (OpenSSL).
bool openssl_verify(ByteSpan public_key, ByteSpan message, ByteSpan signature) {
  EVP_PKEY* key = EVP_PKEY_new_raw_public_key(EVP_PKEY_ED25519, nullptr, public_key.data(),
                                              public_key.size());
  if (key == nullptr) return false;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  bool ok = EVP_DigestVerifyInit(ctx, nullptr, nullptr, nullptr, key) == 1 &&
            EVP_DigestVerify(ctx, signature.data(), signature.size(), message.data(),
                             message.size()) == 1;
  EVP_MD_CTX_free(ctx);
  EVP_PKEY_free(key);
  return ok;
}

Bytes openssl_public_key(ByteSpan seed) {
  EVP_PKEY* key =
      EVP_PKEY_new_raw_private_key(EVP_PKEY_ED25519, nullptr, seed.data(), seed.size());
  Bytes pk(32);
  std::size_t len = pk.size();
  EVP_PKEY_get_raw_public_key(key, pk.data(), &len);
  EVP_PKEY_free(key);
  return pk;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("tzplc-ws-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline std::atomic<int> counter_{0};
  std::filesystem::path path_;
};

// Records body intervals on its own steady clock.
class SleepyTa final : public TrustedApp {
 public:
  struct Log {
    std::mutex mu;
    std::vector<std::pair<std::chrono::steady_clock::time_point,
                          std::chrono::steady_clock::time_point>>
        spans;
  };
  explicit SleepyTa(std::shared_ptr<Log> log, Duration work) : log_(log), work_(work) {}

  void invoke(TaContext& ctx, std::uint32_t entry, InvokeParams& params) override {
    auto t0 = std::chrono::steady_clock::now();
    if (work_.count() > 0) std::this_thread::sleep_for(work_);
    if (entry == 9) throw std::runtime_error("boom");
    if (entry == entry::kExec && params[0].type == ParamType::kMemrefIn) {
      params[1].buffer = params[0].buffer;
      std::reverse(params[1].buffer.begin(), params[1].buffer.end());
    }
    if (entry == entry::kInit) ctx.store_put("tls_key", params[0].buffer);
    if (entry == entry::kExit) params[1].buffer = ctx.store_get("tls_key");
    auto t1 = std::chrono::steady_clock::now();
    if (log_) {
      std::lock_guard lock(log_->mu);
      log_->spans.emplace_back(t0, t1);
    }
  }

 private:
  std::shared_ptr<Log> log_;
  Duration work_;
};

struct Fixture {
  Bytes authority_seed = Bytes(32, 0x11);
  Bytes device_secret = Bytes(32, 0x22);
  Bytes authority_pk = openssl_public_key(authority_seed);
  Bytes device_pk = device_public_key(device_secret);
  std::shared_ptr<SleepyTa::Log> log = std::make_shared<SleepyTa::Log>();
  Duration work{0};

  WorldConfig config(const std::filesystem::path& dir = {}) const {
    WorldConfig c;
    c.authority_public_key = authority_pk;
    c.device_secret = device_secret;
    if (!dir.empty()) {
      c.ledger_path = dir / "ledger";
      c.store_path = dir / "store.json";
    }
    return c;
  }

  void add_kinds(WorldSimulator& w) {
    w.register_kind("sleepy", [this](const TaImage&) {
      return std::make_unique<SleepyTa>(log, work);
    });
  }

  TaManifest manifest(const Uuid& id, std::uint32_t version,
                      std::vector<std::uint32_t> entries = {1, 2, 3, 9}) const {
    TaImage image{"sleepy", std::move(entries), {{"canary", "PLAINTEXT-CANARY"}}};
    return build_manifest(image, id, version, device_pk, authority_seed);
  }
};

TEST(Uuid, ParseAndFormat) {
  Uuid u = Uuid::from_seed(5);
  EXPECT_EQ(u, Uuid::parse(u.to_string()));
  EXPECT_FALSE(Uuid::parse("not-a-uuid"));
  EXPECT_NE(Uuid::from_seed(5), Uuid::from_seed(6));
}

TEST(Manifest, WireFormat) {
  Fixture f;
  TaManifest m = f.manifest(Uuid::from_seed(1), 7);
  Bytes wire = encode_manifest(m);
  EXPECT_EQ(Bytes(m.uuid.bytes().begin(), m.uuid.bytes().end()), Bytes(wire.begin(), wire.begin() + 16));
  EXPECT_EQ(7u, get_u32(wire, 16));
  EXPECT_EQ(m.body.size(), get_u32(wire, 20));
  EXPECT_EQ(64, get_u16(wire, 24 + m.body.size()));
  EXPECT_EQ(wire.size(), 24 + m.body.size() + 2 + 64);
  TaManifest back = decode_manifest(wire);
  EXPECT_EQ(m.body, back.body);
  EXPECT_EQ(m.signature, back.signature);
  wire.pop_back();
  EXPECT_THROW(decode_manifest(wire), WorldError);
}

TEST(Manifest, SignatureMatchesIndependentVerifier) {
  Fixture f;
  TaManifest m = f.manifest(Uuid::from_seed(2), 1);
  EXPECT_TRUE(openssl_verify(f.authority_pk, m.signed_bytes(), m.signature));
  for (std::size_t i = 0; i < m.body.size(); i += 7) {
    TaManifest bad = m;
    bad.body[i] ^= 0x01;
    ASSERT_FALSE(openssl_verify(f.authority_pk, bad.signed_bytes(), bad.signature));
    ASSERT_FALSE(verify_manifest(bad, f.authority_pk));
  }
}

TEST(Manifest, BodyIsSealed) {
  Fixture f;
  TaManifest m = f.manifest(Uuid::from_seed(3), 1);
  EXPECT_FALSE(contains_subsequence(m.body, to_bytes("PLAINTEXT-CANARY")));
  EXPECT_THROW(unseal_on_device(Bytes(32, 0x33), m.body), WorldError);
}

WorldErrc load_error(WorldSimulator& w, const TaManifest& m) {
  try {
    w.load_ta(m);
  } catch (const WorldError& e) {
    return e.code();
  }
  ADD_FAILURE() << "loaded";
  return WorldErrc::kStorageIo;
}

TEST(Load, FirstLoadOpensSession) {
  Fixture f;
  VirtualClock clock;
  WorldSimulator w(f.config(), clock);
  f.add_kinds(w);
  TaSession s = w.load_ta(f.manifest(Uuid::from_seed(1), 1));
  EXPECT_EQ(SessionState::kOpen, w.state(s));
  EXPECT_EQ(1u, w.ledger().get(s.uuid));
}

TEST(Load, Rejections) {
  Fixture f;
  VirtualClock clock;
  WorldSimulator w(f.config(), clock);
  f.add_kinds(w);
  Uuid id = Uuid::from_seed(1);
  TaSession s = w.load_ta(f.manifest(id, 1));
  w.close_session(s);
  EXPECT_EQ(WorldErrc::kVersionRollback, load_error(w, f.manifest(id, 0)));

  TaManifest flipped = f.manifest(Uuid::from_seed(2), 1);
  flipped.body[flipped.body.size() / 2] ^= 0x80;
  EXPECT_EQ(WorldErrc::kBadSignature, load_error(w, flipped));

  TaManifest unsigned_m = f.manifest(Uuid::from_seed(3), 1);
  unsigned_m.signature.clear();
  EXPECT_EQ(WorldErrc::kBadSignature, load_error(w, unsigned_m));

  TaManifest foreign = sign_manifest(Uuid::from_seed(4), 1,
                                     f.manifest(Uuid::from_seed(4), 1).body, Bytes(32, 0x99));
  EXPECT_EQ(WorldErrc::kBadSignature, load_error(w, foreign));

  w.load_ta(f.manifest(Uuid::from_seed(5), 1));
  EXPECT_EQ(WorldErrc::kDuplicateUuid, load_error(w, f.manifest(Uuid::from_seed(5), 2)));

  TaImage odd{"nope", {1}, {}};
  EXPECT_EQ(WorldErrc::kUnknownTaKind,
            load_error(w, build_manifest(odd, Uuid::from_seed(6), 1, f.device_pk,
                                         f.authority_seed)));
}

TEST(Load, RollbackMonotonicity) {
  Fixture f;
  VirtualClock clock;
  WorldSimulator w(f.config(), clock);
  f.add_kinds(w);
  Uuid id = Uuid::from_seed(8);
  Rng rng(8);
  std::uint32_t high = 0;
  for (int i = 0; i < 60; ++i) {
    std::uint32_t v = static_cast<std::uint32_t>(rng() % 10);
    try {
      w.close_session(w.load_ta(f.manifest(id, v)));
      ASSERT_GE(v, high);
      high = v;
    } catch (const WorldError& e) {
      ASSERT_EQ(WorldErrc::kVersionRollback, e.code());
      ASSERT_LT(v, high);
    }
    ASSERT_EQ(high, *w.ledger().get(id));
  }
}

TEST(Load, LedgerSurvivesRestart) {
  Fixture f;
  TempDir dir;
  Uuid id = Uuid::from_seed(9);
  {
    VirtualClock clock;
    WorldSimulator w(f.config(dir.path()), clock);
    f.add_kinds(w);
    w.load_ta(f.manifest(id, 2));
  }
  VirtualClock clock;
  WorldSimulator w(f.config(dir.path()), clock);
  f.add_kinds(w);
  EXPECT_EQ(WorldErrc::kVersionRollback, load_error(w, f.manifest(id, 1)));
}

TEST(Invoke, WorldSwitchLatency) {
  Fixture f;
  VirtualClock clock;
  WorldSimulator w(f.config(), clock);
  f.add_kinds(w);
  TaSession s = w.load_ta(f.manifest(Uuid::from_seed(1), 1));
  PhaseRecorder rec(clock);
  Instrumentation instr{&clock, &rec, {}};
  InvokeResult r = w.invoke(s, entry::kExec, {}, &instr);
  EXPECT_EQ(280us, r.latency);
  EXPECT_EQ(0ns, r.body_time);
  EXPECT_EQ(280us, rec.times()[0]);

  WorldConfig zero = f.config();
  zero.round_trip_latency = 0ns;
  WorldSimulator wz(zero, clock);
  f.add_kinds(wz);
  EXPECT_EQ(0ns, wz.invoke(wz.load_ta(f.manifest(Uuid::from_seed(1), 1)), entry::kExec).latency);
}

TEST(Invoke, WallClockAccounting) {
  Fixture f;
  f.work = 2ms;
  WallClock clock;
  WorldSimulator w(f.config(), clock);
  f.add_kinds(w);
  TaSession s = w.load_ta(f.manifest(Uuid::from_seed(1), 1));
  InvokeResult r = w.invoke(s, entry::kExec);
  EXPECT_GE(r.latency, 280us);
  Duration injected = r.latency - r.body_time;
  EXPECT_GE(injected, 280us);
  // Upper bound only guards against runaway sleeps; a loaded host can
  // oversleep by several milliseconds.
  EXPECT_LE(injected, 280us + 50ms);
}

TEST(Invoke, ParamsAndEntryPoints) {
  Fixture f;
  VirtualClock clock;
  WorldSimulator w(f.config(), clock);
  f.add_kinds(w);
  TaSession s = w.load_ta(f.manifest(Uuid::from_seed(1), 1, {entry::kExec}));
  InvokeParams p;
  p[0] = Param::memref_in({1, 2, 3});
  p[1] = Param::memref_out();
  EXPECT_EQ((Bytes{3, 2, 1}), w.invoke(s, entry::kExec, p).params[1].buffer);
  try {
    w.invoke(s, entry::kInit);
    FAIL();
  } catch (const WorldError& e) {
    EXPECT_EQ(WorldErrc::kUnknownEntryPoint, e.code());
  }
  p[0] = Param::memref_in(Bytes(kMaxMemref + 1));
  EXPECT_THROW(w.invoke(s, entry::kExec, p), WorldError);
}

TEST(Invoke, PanicClosesSession) {
  Fixture f;
  VirtualClock clock;
  WorldSimulator w(f.config(), clock);
  f.add_kinds(w);
  TaSession s = w.load_ta(f.manifest(Uuid::from_seed(1), 1));
  try {
    w.invoke(s, 9);
    FAIL();
  } catch (const WorldError& e) {
    EXPECT_EQ(WorldErrc::kTaPanic, e.code());
  }
  EXPECT_EQ(SessionState::kClosed, w.state(s));
  try {
    w.invoke(s, entry::kExec);
    FAIL();
  } catch (const WorldError& e) {
    EXPECT_EQ(WorldErrc::kSessionClosed, e.code());
  }
}

TEST(Invoke, SupplicantDownAfterTimeout) {
  Fixture f;
  VirtualClock clock;
  WorldConfig cfg = f.config();
  cfg.supplicant_timeout = 50ms;
  WorldSimulator w(cfg, clock);
  f.add_kinds(w);
  TaSession s = w.load_ta(f.manifest(Uuid::from_seed(1), 1));
  w.set_supplicant_alive(false);
  auto t0 = std::chrono::steady_clock::now();
  try {
    w.invoke(s, entry::kExec);
    FAIL();
  } catch (const WorldError& e) {
    EXPECT_EQ(WorldErrc::kSupplicantDown, e.code());
  }
  EXPECT_GE(std::chrono::steady_clock::now() - t0, 50ms);
  EXPECT_TRUE(w.trace().empty());

  // Restored within the window: the call goes through.
  std::thread revive([&] {
    std::this_thread::sleep_for(10ms);
    w.set_supplicant_alive(true);
  });
  w.set_supplicant_alive(false);
  EXPECT_NO_THROW(w.invoke(s, entry::kExec));
  revive.join();
}

TEST(Invoke, ConcurrentCallersAreSerialized) {
  Fixture f;
  f.work = 1ms;
  WallClock clock;
  WorldConfig cfg = f.config();
  WorldSimulator w(cfg, clock);
  f.add_kinds(w);
  TaSession s = w.load_ta(f.manifest(Uuid::from_seed(1), 1));
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::thread> callers;
  for (int i = 0; i < 4; ++i) {
    callers.emplace_back([&] {
      for (int k = 0; k < 5; ++k) w.invoke(s, entry::kExec);
    });
  }
  for (auto& t : callers) t.join();
  EXPECT_GE(std::chrono::steady_clock::now() - t0, 20ms);
  auto spans = f.log->spans;
  ASSERT_EQ(20u, spans.size());
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    ASSERT_LE(spans[i - 1].second, spans[i].first) << "bodies overlap";
  }
  auto trace = w.trace();
  std::sort(trace.begin(), trace.end(),
            [](const auto& a, const auto& b) { return a.body_start < b.body_start; });
  for (std::size_t i = 1; i < trace.size(); ++i) {
    ASSERT_LE(trace[i - 1].body_end, trace[i].body_start);
  }
}

TEST(SecureStorage, RoundTripAndIsolation) {
  Fixture f;
  TempDir dir;
  VirtualClock clock;
  WorldSimulator w(f.config(dir.path()), clock);
  f.add_kinds(w);
  Uuid a = Uuid::from_seed(1);
  TaSession s = w.load_ta(f.manifest(a, 1));
  Bytes key = to_bytes("K-0123456789abcdef-secret");
  InvokeParams p;
  p[0] = Param::memref_in(key);
  w.invoke(s, entry::kInit, p);
  EXPECT_EQ(key, w.invoke(s, entry::kExit).params[1].buffer);

  Bytes backing = w.store_backing_bytes();
  EXPECT_FALSE(backing.empty());
  EXPECT_FALSE(contains_subsequence(backing, key));
  EXPECT_FALSE(contains_subsequence(backing, to_bytes(to_hex(key))));
  std::ifstream in(dir.path() / "store.json", std::ios::binary);
  std::string file((std::istreambuf_iterator<char>(in)), {});
  EXPECT_FALSE(contains_subsequence(to_bytes(file), key));

  try {
    w.normal_world_store_get(a, "tls_key");
    FAIL();
  } catch (const WorldError& e) {
    EXPECT_EQ(WorldErrc::kIsolationViolation, e.code());
  }
}

class PeekingTa final : public TrustedApp {
 public:
  explicit PeekingTa(Uuid victim) : victim_(victim) {}
  void invoke(TaContext& ctx, std::uint32_t, InvokeParams&) override {
    ctx.store_get(victim_, "tls_key");
  }

 private:
  Uuid victim_;
};

TEST(SecureStorage, OtherTaIsRefused) {
  Fixture f;
  VirtualClock clock;
  WorldSimulator w(f.config(), clock);
  f.add_kinds(w);
  Uuid a = Uuid::from_seed(1);
  w.register_kind("peek", [a](const TaImage&) { return std::make_unique<PeekingTa>(a); });
  TaSession sa = w.load_ta(f.manifest(a, 1));
  InvokeParams p;
  p[0] = Param::memref_in(to_bytes("K"));
  w.invoke(sa, entry::kInit, p);
  TaImage img{"peek", {2}, {}};
  TaSession sb = w.load_ta(build_manifest(img, Uuid::from_seed(2), 1, f.device_pk,
                                          f.authority_seed));
  try {
    w.invoke(sb, entry::kExec);
    FAIL();
  } catch (const WorldError& e) {
    EXPECT_EQ(WorldErrc::kTaPanic, e.code());
    EXPECT_NE(std::string::npos, std::string(e.what()).find("IsolationViolation"));
  }
}

TEST(SecureStorage, PersistsAcrossRestart) {
  Fixture f;
  TempDir dir;
  SecureStore a(f.device_secret, dir.path() / "s.json");
  a.put(Uuid::from_seed(1), "k", to_bytes("v"));
  SecureStore b(f.device_secret, dir.path() / "s.json");
  EXPECT_EQ(to_bytes("v"), b.get(Uuid::from_seed(1), "k"));
  EXPECT_THROW(b.get(Uuid::from_seed(2), "k"), WorldError);
}

TEST(SharedMemory, PublishAndBounds) {
  SharedMemoryRegion r(64);
  r.publish(Bytes(8, 0xAB));
  EXPECT_EQ(Bytes(8, 0xAB), r.normal_read());
  try {
    r.publish(Bytes(65));
    FAIL();
  } catch (const WorldError& e) {
    EXPECT_EQ(WorldErrc::kPayloadTooLarge, e.code());
  }
  EXPECT_NO_THROW(r.publish(Bytes(64)));
}

TEST(SharedMemory, NormalWritesNeverReachSecureSide) {
  SharedMemoryRegion r(32);
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    Bytes payload(1 + rng() % 32);
    for (auto& b : payload) b = static_cast<std::uint8_t>(rng());
    r.publish(payload);
    Bytes junk(rng() % 40);
    for (auto& b : junk) b = static_cast<std::uint8_t>(rng());
    r.normal_write(rng() % 32, junk);
    ASSERT_EQ(payload, r.secure_view());
  }
}

TEST(SharedMemory, ReadersNeverSeeTornWrites) {
  SharedMemoryRegion r(256);
  std::atomic<bool> done{false};
  std::thread writer([&] {
    for (int i = 0; i < 5000; ++i) r.publish(Bytes(256, static_cast<std::uint8_t>(i)));
    done = true;
  });
  while (!done) {
    Bytes b = r.normal_read();
    for (auto x : b) ASSERT_EQ(b[0], x);
  }
  writer.join();
}

}  // namespace
}  // namespace tzplc::worldsim
