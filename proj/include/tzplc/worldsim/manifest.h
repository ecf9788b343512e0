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

#ifndef TZPLC_WORLDSIM_MANIFEST_H_
#define TZPLC_WORLDSIM_MANIFEST_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tzplc/common/bytes.h"
#include "tzplc/common/error.h"

namespace tzplc::worldsim {

enum class WorldErrc {
  kBadSignature,
  kVersionRollback,
  kUnknownEntryPoint,
  kSupplicantDown,
  kTaPanic,
  kSessionClosed,
  kPayloadTooLarge,
  kNotFound,
  kIsolationViolation,
  kDuplicateUuid,
  kMalformedManifest,
  kUnknownTaKind,
  kBadParameter,
  kStorageIo,
};

constexpr std::string_view module_name(WorldErrc) { return "worldsim"; }
std::string_view to_string(WorldErrc code);

using WorldError = CodedError<WorldErrc>;

class Uuid {
 public:
  Uuid() = default;
  explicit Uuid(std::array<std::uint8_t, 16> bytes) : bytes_(bytes) {}

  // Canonical 8-4-4-4-12 hex form; nullopt on malformed text.
  static std::optional<Uuid> parse(std::string_view text);
  // Version-4 style uuid drawn from a seed.
  static Uuid from_seed(std::uint64_t seed);

  const std::array<std::uint8_t, 16>& bytes() const { return bytes_; }
  std::string to_string() const;

  auto operator<=>(const Uuid&) const = default;

 private:
  std::array<std::uint8_t, 16> bytes_{};
};

// Entry-point identifiers shared by the runtime's two TA kinds.
namespace entry {
inline constexpr std::uint32_t kControlLogic = 0;
inline constexpr std::uint32_t kInit = 1;
inline constexpr std::uint32_t kExec = 2;
inline constexpr std::uint32_t kExit = 3;
}  // namespace entry

std::string entry_name(std::uint32_t id);

// Plaintext content of a TA. It only exists inside the secure world; on disk
// and in transit the manifest body is this, serialized and sealed to the
// device key.
struct TaImage {
  std::string kind;
  std::vector<std::uint32_t> entry_points;
  nlohmann::json config;

  Bytes serialize() const;
  static TaImage deserialize(ByteSpan bytes);
};

// Wire form: uuid(16) | version u32 | body length u32 | body |
//            signature length u16 | signature (all big-endian).
struct TaManifest {
  Uuid uuid;
  std::uint32_t version = 0;
  Bytes body;
  Bytes signature;

  // The bytes the authority signs: uuid | version | body length | body.
  Bytes signed_bytes() const;
};

Bytes encode_manifest(const TaManifest& m);
// Throws kMalformedManifest.
TaManifest decode_manifest(ByteSpan bytes);

// Ed25519 over signed_bytes() with the authority's 32-byte seed.
TaManifest sign_manifest(const Uuid& uuid, std::uint32_t version, Bytes body,
                         ByteSpan authority_seed);
bool verify_manifest(const TaManifest& m, ByteSpan authority_public_key);

// Device sealing key (X25519) derived from the 32-byte device secret.
Bytes device_public_key(ByteSpan device_secret);
Bytes seal_to_device(ByteSpan device_public_key, ByteSpan plaintext);
// Throws kMalformedManifest if the body was not sealed to this device.
Bytes unseal_on_device(ByteSpan device_secret, ByteSpan sealed);

// Build-side helper: serialize, seal and sign an image.
TaManifest build_manifest(const TaImage& image, const Uuid& uuid, std::uint32_t version,
                          ByteSpan device_public_key, ByteSpan authority_seed);

}  // namespace tzplc::worldsim

#endif  // TZPLC_WORLDSIM_MANIFEST_H_
