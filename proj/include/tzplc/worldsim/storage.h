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

#ifndef TZPLC_WORLDSIM_STORAGE_H_
#define TZPLC_WORLDSIM_STORAGE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include "tzplc/worldsim/manifest.h"

namespace tzplc::worldsim {

// Highest accepted version per uuid. With a path, every update is written
// through (temp file + rename) and the file is read back on construction.
class VersionLedger {
 public:
  explicit VersionLedger(std::filesystem::path path = {});

  std::optional<std::uint32_t> get(const Uuid& uuid) const;
  // Throws kVersionRollback if `version` is below the recorded one;
  // otherwise records max(recorded, version).
  void admit(const Uuid& uuid, std::uint32_t version);

 private:
  void load();
  void save() const;

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<Uuid, std::uint32_t> versions_;
};

// Per-TA key/value store. Values are sealed (XChaCha20-Poly1305) under a key
// derived from the device secret and the owner's uuid, so the backing file,
// which the normal world can read, never holds plaintext.
class SecureStore {
 public:
  SecureStore(Bytes device_secret, std::filesystem::path path = {});
  ~SecureStore();

  void put(const Uuid& owner, const std::string& key, ByteSpan value);
  // Throws kNotFound.
  Bytes get(const Uuid& owner, const std::string& key) const;
  bool contains(const Uuid& owner, const std::string& key) const;

  // Exactly what the normal world sees of the store.
  Bytes backing_bytes() const;

 private:
  struct Sealed {
    Bytes nonce;
    Bytes ciphertext;
  };

  Bytes owner_key(const Uuid& owner) const;
  void load();
  void save() const;
  std::string serialize() const;

  Bytes device_secret_;
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::pair<Uuid, std::string>, Sealed> entries_;
};

// One-way channel from the secure world to the normal world. The secure side
// publishes; the normal side reads the published copy. The normal side's
// backing buffer may be scribbled on (that is what an attacker with normal
// world root can do) but nothing ever flows back into the secure side.
class SharedMemoryRegion {
 public:
  explicit SharedMemoryRegion(std::size_t size) : size_(size) {}

  std::size_t size() const { return size_; }

  // Secure side. Atomic with respect to readers. Throws kPayloadTooLarge.
  void publish(ByteSpan payload);
  Bytes secure_view() const;

  // Normal side.
  Bytes normal_read() const;
  std::uint64_t generation() const;
  // Overwrites bytes of the normal-side backing at `offset` (clipped to the
  // published length).
  void normal_write(std::size_t offset, ByteSpan data);

 private:
  std::size_t size_;
  mutable std::mutex mu_;
  Bytes secure_;
  Bytes normal_;
  std::uint64_t generation_ = 0;
};

}  // namespace tzplc::worldsim

#endif  // TZPLC_WORLDSIM_STORAGE_H_
