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

#include "tzplc/worldsim/manifest.h"

#include <sodium.h>

#include <cstdio>
#include <stdexcept>

#include "tzplc/common/rng.h"

namespace tzplc::worldsim {

std::string_view to_string(WorldErrc code) {
  switch (code) {
    case WorldErrc::kBadSignature:
      return "BadSignature";
    case WorldErrc::kVersionRollback:
      return "VersionRollback";
    case WorldErrc::kUnknownEntryPoint:
      return "UnknownEntryPoint";
    case WorldErrc::kSupplicantDown:
      return "SupplicantDown";
    case WorldErrc::kTaPanic:
      return "TaPanic";
    case WorldErrc::kSessionClosed:
      return "SessionClosed";
    case WorldErrc::kPayloadTooLarge:
      return "PayloadTooLarge";
    case WorldErrc::kNotFound:
      return "NotFound";
    case WorldErrc::kIsolationViolation:
      return "IsolationViolation";
    case WorldErrc::kDuplicateUuid:
      return "DuplicateUuid";
    case WorldErrc::kMalformedManifest:
      return "MalformedManifest";
    case WorldErrc::kUnknownTaKind:
      return "UnknownTaKind";
    case WorldErrc::kBadParameter:
      return "BadParameter";
    case WorldErrc::kStorageIo:
      return "StorageIo";
  }
  return "WorldError";
}

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium init failed");
}

[[noreturn]] void malformed(const std::string& what) {
  throw WorldError(WorldErrc::kMalformedManifest, what);
}

}  // namespace

std::optional<Uuid> Uuid::parse(std::string_view text) {
  if (text.size() != 36) return std::nullopt;
  std::string hex;
  for (std::size_t i = 0; i < text.size(); ++i) {
    bool dash_pos = i == 8 || i == 13 || i == 18 || i == 23;
    if (dash_pos != (text[i] == '-')) return std::nullopt;
    if (!dash_pos) hex.push_back(text[i]);
  }
  try {
    Bytes b = from_hex(hex);
    std::array<std::uint8_t, 16> a{};
    std::copy(b.begin(), b.end(), a.begin());
    return Uuid(a);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

Uuid Uuid::from_seed(std::uint64_t seed) {
  std::array<std::uint8_t, 16> a{};
  std::uint64_t hi = mix64(seed);
  std::uint64_t lo = mix64(hi ^ seed);
  for (int i = 0; i < 8; ++i) {
    a[i] = static_cast<std::uint8_t>(hi >> (56 - 8 * i));
    a[8 + i] = static_cast<std::uint8_t>(lo >> (56 - 8 * i));
  }
  a[6] = static_cast<std::uint8_t>((a[6] & 0x0F) | 0x40);
  a[8] = static_cast<std::uint8_t>((a[8] & 0x3F) | 0x80);
  return Uuid(a);
}

std::string Uuid::to_string() const {
  std::string hex = to_hex(bytes_);
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" +
         hex.substr(16, 4) + "-" + hex.substr(20);
}

std::string entry_name(std::uint32_t id) {
  switch (id) {
    case entry::kControlLogic:
      return "CONTROL_LOGIC";
    case entry::kInit:
      return "INIT";
    case entry::kExec:
      return "EXEC";
    case entry::kExit:
      return "EXIT";
  }
  return "ENTRY_" + std::to_string(id);
}

Bytes TaImage::serialize() const {
  nlohmann::json j = {{"kind", kind}, {"entry_points", entry_points}, {"config", config}};
  return to_bytes(j.dump());
}

TaImage TaImage::deserialize(ByteSpan bytes) {
  try {
    auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    TaImage image;
    image.kind = j.at("kind").get<std::string>();
    image.entry_points = j.at("entry_points").get<std::vector<std::uint32_t>>();
    image.config = j.value("config", nlohmann::json::object());
    return image;
  } catch (const nlohmann::json::exception& e) {
    malformed(std::string("TA image: ") + e.what());
  }
}

Bytes TaManifest::signed_bytes() const {
  Bytes out(uuid.bytes().begin(), uuid.bytes().end());
  put_u32(out, version);
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  append(out, body);
  return out;
}

Bytes encode_manifest(const TaManifest& m) {
  if (m.signature.size() > 0xFFFF) malformed("signature too long");
  Bytes out = m.signed_bytes();
  put_u16(out, static_cast<std::uint16_t>(m.signature.size()));
  append(out, m.signature);
  return out;
}

TaManifest decode_manifest(ByteSpan bytes) {
  if (bytes.size() < 24) malformed("manifest header truncated");
  TaManifest m;
  std::array<std::uint8_t, 16> id{};
  std::copy_n(bytes.begin(), 16, id.begin());
  m.uuid = Uuid(id);
  m.version = get_u32(bytes, 16);
  std::uint32_t body_len = get_u32(bytes, 20);
  std::size_t at = 24;
  if (bytes.size() - at < std::size_t{body_len} + 2) malformed("manifest body truncated");
  m.body.assign(bytes.begin() + at, bytes.begin() + at + body_len);
  at += body_len;
  std::uint16_t sig_len = get_u16(bytes, at);
  at += 2;
  if (bytes.size() - at != sig_len) malformed("manifest signature length mismatch");
  m.signature.assign(bytes.begin() + at, bytes.end());
  return m;
}

TaManifest sign_manifest(const Uuid& uuid, std::uint32_t version, Bytes body,
                         ByteSpan authority_seed) {
  ensure_sodium();
  if (authority_seed.size() != crypto_sign_SEEDBYTES) {
    throw WorldError(WorldErrc::kBadSignature, "authority seed must be 32 bytes");
  }
  TaManifest m{uuid, version, std::move(body), {}};
  std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
  std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
  crypto_sign_seed_keypair(pk.data(), sk.data(), authority_seed.data());
  Bytes msg = m.signed_bytes();
  m.signature.resize(crypto_sign_BYTES);
  crypto_sign_detached(m.signature.data(), nullptr, msg.data(), msg.size(), sk.data());
  sodium_memzero(sk.data(), sk.size());
  return m;
}

bool verify_manifest(const TaManifest& m, ByteSpan authority_public_key) {
  ensure_sodium();
  if (authority_public_key.size() != crypto_sign_PUBLICKEYBYTES ||
      m.signature.size() != crypto_sign_BYTES) {
    return false;
  }
  Bytes msg = m.signed_bytes();
  return crypto_sign_verify_detached(m.signature.data(), msg.data(), msg.size(),
                                     authority_public_key.data()) == 0;
}

namespace {

struct BoxKeys {
  std::array<std::uint8_t, crypto_box_PUBLICKEYBYTES> pk{};
  std::array<std::uint8_t, crypto_box_SECRETKEYBYTES> sk{};
  ~BoxKeys() { sodium_memzero(sk.data(), sk.size()); }
};

void box_keys(ByteSpan device_secret, BoxKeys& keys) {
  ensure_sodium();
  if (device_secret.size() != crypto_box_SEEDBYTES) {
    throw WorldError(WorldErrc::kMalformedManifest, "device secret must be 32 bytes");
  }
  crypto_box_seed_keypair(keys.pk.data(), keys.sk.data(), device_secret.data());
}

}  // namespace

Bytes device_public_key(ByteSpan device_secret) {
  BoxKeys keys;
  box_keys(device_secret, keys);
  return Bytes(keys.pk.begin(), keys.pk.end());
}

Bytes seal_to_device(ByteSpan device_public_key, ByteSpan plaintext) {
  ensure_sodium();
  if (device_public_key.size() != crypto_box_PUBLICKEYBYTES) {
    malformed("device public key must be 32 bytes");
  }
  Bytes out(plaintext.size() + crypto_box_SEALBYTES);
  crypto_box_seal(out.data(), plaintext.data(), plaintext.size(), device_public_key.data());
  return out;
}

Bytes unseal_on_device(ByteSpan device_secret, ByteSpan sealed) {
  BoxKeys keys;
  box_keys(device_secret, keys);
  if (sealed.size() < crypto_box_SEALBYTES) malformed("sealed body too short");
  Bytes out(sealed.size() - crypto_box_SEALBYTES);
  if (crypto_box_seal_open(out.data(), sealed.data(), sealed.size(), keys.pk.data(),
                           keys.sk.data()) != 0) {
    malformed("body is not sealed to this device");
  }
  return out;
}

TaManifest build_manifest(const TaImage& image, const Uuid& uuid, std::uint32_t version,
                          ByteSpan device_public_key, ByteSpan authority_seed) {
  return sign_manifest(uuid, version, seal_to_device(device_public_key, image.serialize()),
                       authority_seed);
}

}  // namespace tzplc::worldsim
