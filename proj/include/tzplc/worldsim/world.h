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

#ifndef TZPLC_WORLDSIM_WORLD_H_
#define TZPLC_WORLDSIM_WORLD_H_

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tzplc/common/clock.h"
#include "tzplc/common/cycle_report.h"
#include "tzplc/net/stream.h"
#include "tzplc/worldsim/manifest.h"
#include "tzplc/worldsim/storage.h"

namespace tzplc::worldsim {

enum class ParamType { kNone, kValueIn, kValueOut, kValueInOut, kMemrefIn, kMemrefOut, kMemrefInOut };

inline constexpr std::size_t kMaxParams = 4;
inline constexpr std::size_t kMaxMemref = 64 * 1024;

// One invoke parameter: a value pair or a bounded memory reference.
struct Param {
  ParamType type = ParamType::kNone;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  Bytes buffer;

  static Param value_in(std::uint32_t a, std::uint32_t b = 0) {
    return {ParamType::kValueIn, a, b, {}};
  }
  static Param value_out() { return {ParamType::kValueOut, 0, 0, {}}; }
  static Param memref_in(Bytes data) { return {ParamType::kMemrefIn, 0, 0, std::move(data)}; }
  static Param memref_out() { return {ParamType::kMemrefOut, 0, 0, {}}; }
};

using InvokeParams = std::array<Param, kMaxParams>;

struct InvokeResult {
  InvokeParams params;
  // Both on the world clock. latency - body_time is the injected switch.
  Duration latency{0};
  Duration body_time{0};
};

struct InvokeRecord {
  std::uint64_t session = 0;
  Uuid uuid;
  std::uint32_t entry = 0;
  Duration body_start{0};
  Duration body_end{0};
  bool ok = true;
  std::string error;
};

struct TaSession {
  std::uint64_t id = 0;
  Uuid uuid;
};

enum class SessionState { kOpen, kClosed };

class WorldSimulator;

// Services the secure world offers a running TA. Only reachable from inside
// an entry point.
class TaContext {
 public:
  const Uuid& uuid() const { return uuid_; }
  const TaImage& image() const { return image_; }

  void store_put(const std::string& key, ByteSpan value);
  Bytes store_get(const std::string& key) const;
  bool store_contains(const std::string& key) const;
  // Access to another TA's objects: always kIsolationViolation unless
  // `owner` is this TA.
  Bytes store_get(const Uuid& owner, const std::string& key) const;

  // Throws kNotFound for unknown regions, kPayloadTooLarge.
  void shm_publish(const std::string& region, ByteSpan payload);

  // Secure-world socket. The bytes still travel through the normal world's
  // network stack (the supplicant forwards them), so taps see them.
  std::unique_ptr<net::ByteStream> socket_connect(const net::Endpoint& endpoint,
                                                  Duration timeout);

  // Phase accounting of the invoking cycle; may be null.
  Instrumentation* instrumentation() const { return instrumentation_; }
  Clock& clock() const;

 private:
  friend class WorldSimulator;
  TaContext(WorldSimulator& world, Uuid uuid, TaImage image)
      : world_(&world), uuid_(uuid), image_(std::move(image)) {}

  WorldSimulator* world_;
  Uuid uuid_;
  TaImage image_;
  Instrumentation* instrumentation_ = nullptr;
};

class TrustedApp {
 public:
  virtual ~TrustedApp() = default;
  virtual void open(TaContext&) {}
  virtual void invoke(TaContext& ctx, std::uint32_t entry, InvokeParams& params) = 0;
  virtual void close(TaContext&) {}
};

using TaFactory = std::function<std::unique_ptr<TrustedApp>(const TaImage&)>;

struct WorldConfig {
  Duration round_trip_latency = std::chrono::microseconds(280);
  // How long an invoke waits for a dead supplicant before failing.
  Duration supplicant_timeout = std::chrono::milliseconds(100);
  Bytes authority_public_key;
  Bytes device_secret;
  std::filesystem::path ledger_path;
  std::filesystem::path store_path;
};

// In-process model of the secure world. Every entry into it goes through
// invoke(), which is serialized (one secure core) and pays the configured
// world-switch round trip on the shared clock.
class WorldSimulator {
 public:
  WorldSimulator(WorldConfig config, Clock& clock);
  ~WorldSimulator();
  WorldSimulator(const WorldSimulator&) = delete;
  WorldSimulator& operator=(const WorldSimulator&) = delete;

  void register_kind(const std::string& kind, TaFactory factory);

  // Verify-before-load. Errors: BadSignature, VersionRollback,
  // MalformedManifest, UnknownTaKind, DuplicateUuid.
  TaSession load_ta(const TaManifest& manifest);
  TaSession load_ta(ByteSpan manifest_bytes);

  // Errors: SessionClosed, UnknownEntryPoint, SupplicantDown, TaPanic,
  // BadParameter.
  InvokeResult invoke(const TaSession& session, std::uint32_t entry,
                      InvokeParams params = {}, Instrumentation* instrumentation = nullptr);

  void close_session(const TaSession& session);
  SessionState state(const TaSession& session) const;

  void set_supplicant_alive(bool alive);
  bool supplicant_alive() const;

  std::shared_ptr<SharedMemoryRegion> create_shm(const std::string& name, std::size_t size);
  // Normal-world handle of a region (read, or tamper with its backing).
  std::shared_ptr<SharedMemoryRegion> shm(const std::string& name) const;

  void set_socket_connector(std::shared_ptr<net::Connector> connector);

  // The normal world asking for a TA's stored object: always refused.
  Bytes normal_world_store_get(const Uuid& owner, const std::string& key) const;
  Bytes store_backing_bytes() const { return store_.backing_bytes(); }
  const VersionLedger& ledger() const { return ledger_; }

  std::vector<InvokeRecord> trace() const;
  void clear_trace();
  void set_invoke_observer(std::function<void(const InvokeRecord&)> observer);

  const WorldConfig& config() const { return config_; }
  Clock& clock() const { return *clock_; }

 private:
  friend class TaContext;

  struct Session {
    TaSession handle;
    std::unique_ptr<TrustedApp> ta;
    std::unique_ptr<TaContext> context;
    bool open = true;
  };

  Session& session(const TaSession& handle);
  void record(InvokeRecord rec);

  WorldConfig config_;
  Clock* clock_;
  VersionLedger ledger_;
  SecureStore store_;

  // Serializes every entry into the secure world.
  std::mutex exec_mu_;
  mutable std::mutex mu_;
  std::condition_variable supplicant_cv_;
  bool supplicant_alive_ = true;
  std::map<std::string, TaFactory> factories_;
  std::map<std::uint64_t, std::unique_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;
  std::map<std::string, std::shared_ptr<SharedMemoryRegion>> regions_;
  std::shared_ptr<net::Connector> connector_;
  std::vector<InvokeRecord> trace_;
  std::function<void(const InvokeRecord&)> observer_;
};

}  // namespace tzplc::worldsim

#endif  // TZPLC_WORLDSIM_WORLD_H_
