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

#include "tzplc/worldsim/storage.h"

#include <sodium.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace tzplc::worldsim {

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& data) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw WorldError(WorldErrc::kStorageIo, "cannot write " + tmp.string());
    out << data;
    if (!out.flush()) throw WorldError(WorldErrc::kStorageIo, "short write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw WorldError(WorldErrc::kStorageIo, "rename: " + ec.message());
}

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

VersionLedger::VersionLedger(std::filesystem::path path) : path_(std::move(path)) {
  load();
}

void VersionLedger::load() {
  if (path_.empty()) return;
  auto text = read_file(path_);
  if (!text) return;
  std::istringstream in(*text);
  std::string id;
  std::uint32_t version = 0;
  while (in >> id >> version) {
    auto uuid = Uuid::parse(id);
    if (!uuid) throw WorldError(WorldErrc::kStorageIo, "corrupt ledger entry " + id);
    versions_[*uuid] = version;
  }
}

void VersionLedger::save() const {
  if (path_.empty()) return;
  std::string out;
  for (const auto& [uuid, version] : versions_) {
    out += uuid.to_string() + " " + std::to_string(version) + "\n";
  }
  write_atomically(path_, out);
}

std::optional<std::uint32_t> VersionLedger::get(const Uuid& uuid) const {
  std::lock_guard lock(mu_);
  auto it = versions_.find(uuid);
  if (it == versions_.end()) return std::nullopt;
  return it->second;
}

void VersionLedger::admit(const Uuid& uuid, std::uint32_t version) {
  std::lock_guard lock(mu_);
  auto it = versions_.find(uuid);
  if (it != versions_.end()) {
    if (version < it->second) {
      throw WorldError(WorldErrc::kVersionRollback,
                       uuid.to_string() + " version " + std::to_string(version) +
                           " is below accepted " + std::to_string(it->second));
    }
    if (version == it->second) return;
  }
  versions_[uuid] = version;
  save();
}

SecureStore::SecureStore(Bytes device_secret, std::filesystem::path path)
    : device_secret_(std::move(device_secret)), path_(std::move(path)) {
  if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
  if (device_secret_.size() != 32) {
    throw WorldError(WorldErrc::kStorageIo, "device secret must be 32 bytes");
  }
  load();
}

SecureStore::~SecureStore() { sodium_memzero(device_secret_.data(), device_secret_.size()); }

Bytes SecureStore::owner_key(const Uuid& owner) const {
  Bytes key(crypto_aead_xchacha20poly1305_ietf_KEYBYTES);
  Bytes msg = to_bytes("tzplc/securestore/v1");
  append(msg, owner.bytes());
  crypto_generichash(key.data(), key.size(), msg.data(), msg.size(), device_secret_.data(),
                     device_secret_.size());
  return key;
}

namespace {

Bytes associated_data(const Uuid& owner, const std::string& key) {
  Bytes ad(owner.bytes().begin(), owner.bytes().end());
  append(ad, to_bytes(key));
  return ad;
}

}  // namespace

void SecureStore::put(const Uuid& owner, const std::string& key, ByteSpan value) {
  Sealed s;
  s.nonce.resize(crypto_aead_xchacha20poly1305_ietf_NPUBBYTES);
  randombytes_buf(s.nonce.data(), s.nonce.size());
  s.ciphertext.resize(value.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
  Bytes k = owner_key(owner);
  Bytes ad = associated_data(owner, key);
  unsigned long long clen = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(s.ciphertext.data(), &clen, value.data(),
                                             value.size(), ad.data(), ad.size(), nullptr,
                                             s.nonce.data(), k.data());
  sodium_memzero(k.data(), k.size());
  std::lock_guard lock(mu_);
  entries_[{owner, key}] = std::move(s);
  save();
}

Bytes SecureStore::get(const Uuid& owner, const std::string& key) const {
  Sealed s;
  {
    std::lock_guard lock(mu_);
    auto it = entries_.find({owner, key});
    if (it == entries_.end()) {
      throw WorldError(WorldErrc::kNotFound, "no entry '" + key + "'");
    }
    s = it->second;
  }
  Bytes k = owner_key(owner);
  Bytes ad = associated_data(owner, key);
  Bytes out(s.ciphertext.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long plen = 0;
  int rc = crypto_aead_xchacha20poly1305_ietf_decrypt(
      out.data(), &plen, nullptr, s.ciphertext.data(), s.ciphertext.size(), ad.data(),
      ad.size(), s.nonce.data(), k.data());
  sodium_memzero(k.data(), k.size());
  if (rc != 0) throw WorldError(WorldErrc::kStorageIo, "entry '" + key + "' corrupted");
  return out;
}

bool SecureStore::contains(const Uuid& owner, const std::string& key) const {
  std::lock_guard lock(mu_);
  return entries_.count({owner, key}) > 0;
}

std::string SecureStore::serialize() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [id, s] : entries_) {
    entries.push_back({{"owner", id.first.to_string()},
                       {"key", id.second},
                       {"nonce", to_hex(s.nonce)},
                       {"ciphertext", to_hex(s.ciphertext)}});
  }
  return nlohmann::json{{"entries", entries}}.dump(1);
}

Bytes SecureStore::backing_bytes() const {
  std::lock_guard lock(mu_);
  if (!path_.empty()) {
    if (auto text = read_file(path_)) return to_bytes(*text);
    return {};
  }
  return to_bytes(serialize());
}

void SecureStore::load() {
  if (path_.empty()) return;
  auto text = read_file(path_);
  if (!text) return;
  try {
    auto j = nlohmann::json::parse(*text);
    for (const auto& e : j.at("entries")) {
      auto owner = Uuid::parse(e.at("owner").get<std::string>());
      if (!owner) throw WorldError(WorldErrc::kStorageIo, "bad owner uuid");
      entries_[{*owner, e.at("key").get<std::string>()}] =
          Sealed{from_hex(e.at("nonce").get<std::string>()),
                 from_hex(e.at("ciphertext").get<std::string>())};
    }
  } catch (const nlohmann::json::exception& e) {
    throw WorldError(WorldErrc::kStorageIo, std::string("corrupt store: ") + e.what());
  }
}

void SecureStore::save() const {
  if (!path_.empty()) write_atomically(path_, serialize());
}

void SharedMemoryRegion::publish(ByteSpan payload) {
  if (payload.size() > size_) {
    throw WorldError(WorldErrc::kPayloadTooLarge,
                     std::to_string(payload.size()) + " bytes into a region of " +
                         std::to_string(size_));
  }
  std::lock_guard lock(mu_);
  secure_.assign(payload.begin(), payload.end());
  normal_ = secure_;
  ++generation_;
}

Bytes SharedMemoryRegion::secure_view() const {
  std::lock_guard lock(mu_);
  return secure_;
}

Bytes SharedMemoryRegion::normal_read() const {
  std::lock_guard lock(mu_);
  return normal_;
}

std::uint64_t SharedMemoryRegion::generation() const {
  std::lock_guard lock(mu_);
  return generation_;
}

void SharedMemoryRegion::normal_write(std::size_t offset, ByteSpan data) {
  std::lock_guard lock(mu_);
  for (std::size_t i = 0; i < data.size() && offset + i < normal_.size(); ++i) {
    normal_[offset + i] = data[i];
  }
}

}  // namespace tzplc::worldsim
