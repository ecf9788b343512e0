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

#include "tzplc/worldsim/world.h"

#include <algorithm>

namespace tzplc::worldsim {

void TaContext::store_put(const std::string& key, ByteSpan value) {
  world_->store_.put(uuid_, key, value);
}

Bytes TaContext::store_get(const std::string& key) const {
  return world_->store_.get(uuid_, key);
}

bool TaContext::store_contains(const std::string& key) const {
  return world_->store_.contains(uuid_, key);
}

Bytes TaContext::store_get(const Uuid& owner, const std::string& key) const {
  if (owner != uuid_) {
    throw WorldError(WorldErrc::kIsolationViolation,
                     uuid_.to_string() + " may not read objects of " + owner.to_string());
  }
  return store_get(key);
}

void TaContext::shm_publish(const std::string& region, ByteSpan payload) {
  auto r = world_->shm(region);
  if (!r) throw WorldError(WorldErrc::kNotFound, "no shared memory region '" + region + "'");
  r->publish(payload);
}

std::unique_ptr<net::ByteStream> TaContext::socket_connect(const net::Endpoint& endpoint,
                                                           Duration timeout) {
  std::shared_ptr<net::Connector> connector;
  {
    std::lock_guard lock(world_->mu_);
    if (!world_->supplicant_alive_) {
      throw net::NetError(net::NetErrc::kConnectFailed, "supplicant not running");
    }
    connector = world_->connector_;
  }
  if (!connector) {
    throw net::NetError(net::NetErrc::kConnectFailed, "no socket connector configured");
  }
  return connector->connect(endpoint, timeout);
}

Clock& TaContext::clock() const { return world_->clock(); }

WorldSimulator::WorldSimulator(WorldConfig config, Clock& clock)
    : config_(std::move(config)),
      clock_(&clock),
      ledger_(config_.ledger_path),
      store_(config_.device_secret, config_.store_path) {
  if (config_.round_trip_latency.count() < 0) {
    throw WorldError(WorldErrc::kBadParameter, "round trip latency must be >= 0");
  }
}

WorldSimulator::~WorldSimulator() {
  std::lock_guard exec(exec_mu_);
  for (auto& [id, s] : sessions_) {
    if (!s->open) continue;
    try {
      s->ta->close(*s->context);
    } catch (...) {
    }
  }
}

void WorldSimulator::register_kind(const std::string& kind, TaFactory factory) {
  std::lock_guard lock(mu_);
  factories_[kind] = std::move(factory);
}

TaSession WorldSimulator::load_ta(ByteSpan manifest_bytes) {
  TaManifest m;
  try {
    m = decode_manifest(manifest_bytes);
  } catch (const WorldError& e) {
    // An unparsable manifest cannot carry a valid signature either.
    throw WorldError(WorldErrc::kBadSignature, e.what());
  }
  return load_ta(m);
}

TaSession WorldSimulator::load_ta(const TaManifest& manifest) {
  if (!verify_manifest(manifest, config_.authority_public_key)) {
    throw WorldError(WorldErrc::kBadSignature,
                     "manifest for " + manifest.uuid.to_string() + " fails verification");
  }
  if (auto accepted = ledger_.get(manifest.uuid); accepted && manifest.version < *accepted) {
    throw WorldError(WorldErrc::kVersionRollback,
                     manifest.uuid.to_string() + " version " +
                         std::to_string(manifest.version) + " is below accepted " +
                         std::to_string(*accepted));
  }
  TaImage image = TaImage::deserialize(unseal_on_device(config_.device_secret, manifest.body));

  std::lock_guard exec(exec_mu_);
  TaFactory factory;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, s] : sessions_) {
      if (s->open && s->handle.uuid == manifest.uuid) {
        throw WorldError(WorldErrc::kDuplicateUuid,
                         manifest.uuid.to_string() + " already has an open session");
      }
    }
    auto it = factories_.find(image.kind);
    if (it == factories_.end()) {
      throw WorldError(WorldErrc::kUnknownTaKind, "no TA kind '" + image.kind + "'");
    }
    factory = it->second;
  }
  auto s = std::make_unique<Session>();
  s->ta = factory(image);
  s->context.reset(new TaContext(*this, manifest.uuid, std::move(image)));
  ledger_.admit(manifest.uuid, manifest.version);
  s->ta->open(*s->context);
  std::lock_guard lock(mu_);
  s->handle = {next_session_++, manifest.uuid};
  TaSession handle = s->handle;
  sessions_[handle.id] = std::move(s);
  return handle;
}

WorldSimulator::Session& WorldSimulator::session(const TaSession& handle) {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(handle.id);
  if (it == sessions_.end() || !it->second->open) {
    throw WorldError(WorldErrc::kSessionClosed, "session " + std::to_string(handle.id));
  }
  return *it->second;
}

void WorldSimulator::record(InvokeRecord rec) {
  std::function<void(const InvokeRecord&)> observer;
  {
    std::lock_guard lock(mu_);
    trace_.push_back(rec);
    observer = observer_;
  }
  if (observer) observer(rec);
}

InvokeResult WorldSimulator::invoke(const TaSession& handle, std::uint32_t entry_id,
                                    InvokeParams params, Instrumentation* instrumentation) {
  {
    std::unique_lock lock(mu_);
    if (!supplicant_cv_.wait_for(lock, config_.supplicant_timeout,
                                 [this] { return supplicant_alive_; })) {
      throw WorldError(WorldErrc::kSupplicantDown,
                       "no supplicant to dispatch " + entry_name(entry_id));
    }
  }
  for (const auto& p : params) {
    if (p.buffer.size() > kMaxMemref) {
      throw WorldError(WorldErrc::kBadParameter, "memref exceeds bound");
    }
  }

  std::lock_guard exec(exec_mu_);
  Session& s = session(handle);
  const auto& entries = s.context->image().entry_points;
  if (std::find(entries.begin(), entries.end(), entry_id) == entries.end()) {
    throw WorldError(WorldErrc::kUnknownEntryPoint,
                     entry_name(entry_id) + " not exported by " + handle.uuid.to_string());
  }

  PhaseRecorder* recorder = instrumentation ? instrumentation->recorder : nullptr;
  Duration half = config_.round_trip_latency / 2;
  Duration start = clock_->now();
  {
    ScopedPhase sw(recorder, Phase::kWorldSwitch);
    clock_->charge(half);
  }
  InvokeRecord rec{handle.id, handle.uuid, entry_id, clock_->now(), {}, true, {}};
  s.context->instrumentation_ = instrumentation;
  try {
    s.ta->invoke(*s.context, entry_id, params);
  } catch (const std::exception& e) {
    s.context->instrumentation_ = nullptr;
    rec.body_end = clock_->now();
    rec.ok = false;
    rec.error = e.what();
    {
      std::lock_guard lock(mu_);
      s.open = false;
    }
    {
      ScopedPhase sw(recorder, Phase::kWorldSwitch);
      clock_->charge(config_.round_trip_latency - half);
    }
    record(rec);
    throw WorldError(WorldErrc::kTaPanic, entry_name(entry_id) + ": " + e.what());
  }
  s.context->instrumentation_ = nullptr;
  rec.body_end = clock_->now();
  {
    ScopedPhase sw(recorder, Phase::kWorldSwitch);
    clock_->charge(config_.round_trip_latency - half);
  }
  InvokeResult result{std::move(params), clock_->now() - start,
                      rec.body_end - rec.body_start};
  for (const auto& p : result.params) {
    if (p.buffer.size() > kMaxMemref) {
      throw WorldError(WorldErrc::kBadParameter, "TA output exceeds memref bound");
    }
  }
  record(std::move(rec));
  return result;
}

void WorldSimulator::close_session(const TaSession& handle) {
  std::lock_guard exec(exec_mu_);
  Session& s = session(handle);
  try {
    s.ta->close(*s.context);
  } catch (...) {
  }
  std::lock_guard lock(mu_);
  s.open = false;
}

SessionState WorldSimulator::state(const TaSession& handle) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(handle.id);
  return it != sessions_.end() && it->second->open ? SessionState::kOpen
                                                   : SessionState::kClosed;
}

void WorldSimulator::set_supplicant_alive(bool alive) {
  {
    std::lock_guard lock(mu_);
    supplicant_alive_ = alive;
  }
  supplicant_cv_.notify_all();
}

bool WorldSimulator::supplicant_alive() const {
  std::lock_guard lock(mu_);
  return supplicant_alive_;
}

std::shared_ptr<SharedMemoryRegion> WorldSimulator::create_shm(const std::string& name,
                                                               std::size_t size) {
  std::lock_guard lock(mu_);
  auto& r = regions_[name];
  r = std::make_shared<SharedMemoryRegion>(size);
  return r;
}

std::shared_ptr<SharedMemoryRegion> WorldSimulator::shm(const std::string& name) const {
  std::lock_guard lock(mu_);
  auto it = regions_.find(name);
  return it == regions_.end() ? nullptr : it->second;
}

void WorldSimulator::set_socket_connector(std::shared_ptr<net::Connector> connector) {
  std::lock_guard lock(mu_);
  connector_ = std::move(connector);
}

Bytes WorldSimulator::normal_world_store_get(const Uuid& owner, const std::string& key) const {
  throw WorldError(WorldErrc::kIsolationViolation,
                   "normal world may not read '" + key + "' of " + owner.to_string());
}

std::vector<InvokeRecord> WorldSimulator::trace() const {
  std::lock_guard lock(mu_);
  return trace_;
}

void WorldSimulator::clear_trace() {
  std::lock_guard lock(mu_);
  trace_.clear();
}

void WorldSimulator::set_invoke_observer(std::function<void(const InvokeRecord&)> observer) {
  std::lock_guard lock(mu_);
  observer_ = std::move(observer);
}

}  // namespace tzplc::worldsim
