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

#ifndef TZPLC_SECURECHAN_CHANNEL_H_
#define TZPLC_SECURECHAN_CHANNEL_H_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tzplc/common/bytes.h"
#include "tzplc/common/cycle_report.h"
#include "tzplc/common/error.h"
#include "tzplc/common/rng.h"
#include "tzplc/net/stream.h"

namespace tzplc::securechan {

enum class ChanErrc {
  kPeerNotTrusted,
  kHandshakeTampered,
  kTransportClosed,
  kSequenceExhausted,
  kAuthFailed,
  kReplay,
  kTruncated,
  kBadKey,
};

constexpr std::string_view module_name(ChanErrc) { return "securechan"; }
std::string_view to_string(ChanErrc code);

using ChanError = CodedError<ChanErrc>;

inline constexpr std::size_t kKeySize = 32;
inline constexpr std::size_t kSignatureSize = 64;
inline constexpr std::size_t kTagSize = 16;
// Length field + sequence number.
inline constexpr std::size_t kRecordHeaderSize = 12;
inline constexpr std::size_t kMaxPlaintext = 16 * 1024;

// Long-term Ed25519 identity. `private_key` is the 32-byte seed and is empty
// for identities that only appear in trust sets.
struct PeerIdentity {
  std::string name;
  Bytes public_key;
  Bytes private_key;

  PeerIdentity public_only() const { return {name, public_key, {}}; }
};

PeerIdentity identity_from_seed(std::string name, ByteSpan seed);
PeerIdentity generate_identity(std::string name, Rng& rng);

// Flat set of trusted raw public keys.
class TrustSet {
 public:
  TrustSet() = default;
  explicit TrustSet(std::vector<PeerIdentity> peers);

  void add(const PeerIdentity& peer) { peers_.push_back(peer.public_only()); }
  const PeerIdentity* find(ByteSpan public_key) const;
  const std::vector<PeerIdentity>& peers() const { return peers_; }

 private:
  std::vector<PeerIdentity> peers_;
};

struct SessionKeys {
  std::array<std::uint8_t, kKeySize> send{};
  std::array<std::uint8_t, kKeySize> recv{};
};

// Record layer state for one direction pair. Records are
//   u32 length | u64 sequence | ChaCha20-Poly1305(plaintext) + tag
// where length counts the bytes after the length field and the first twelve
// bytes are authenticated as associated data.
class SecureSession {
 public:
  SecureSession(SessionKeys keys, PeerIdentity peer, std::uint64_t last_sent = 0,
                std::uint64_t last_received = 0);

  Bytes seal(ByteSpan plaintext);
  Bytes open(ByteSpan record);

  std::uint64_t send_seq() const { return last_sent_; }
  std::uint64_t recv_seq() const { return last_received_; }
  const PeerIdentity& peer() const { return peer_; }

 private:
  SessionKeys keys_;
  PeerIdentity peer_;
  std::uint64_t last_sent_;
  std::uint64_t last_received_;
};

enum class Role { kInitiator, kResponder };

// Mutually authenticated key agreement: ephemeral X25519 plus Ed25519
// signatures over the transcript. Three length-prefixed messages:
//   initiator -> responder: 0x01 | eph_i | nonce_i | id_i
//   responder -> initiator: 0x02 | eph_r | nonce_r | id_r | sig_r
//   initiator -> responder: 0x03 | sig_i
// Signature checks run before trust checks, so any modified byte surfaces as
// kHandshakeTampered on at least one side.
SecureSession handshake(net::ByteStream& transport, const PeerIdentity& me,
                        const TrustSet& trusted, Role role, Duration timeout);

// Byte stream carrying one record per write_all call.
class SecureStream final : public net::ByteStream {
 public:
  SecureStream(std::unique_ptr<net::ByteStream> inner, SecureSession session,
               Instrumentation* instrumentation = nullptr);

  void write_all(ByteSpan data) override;
  void read_exact(MutableByteSpan out, Duration timeout) override;
  void close() override { inner_->close(); }

  const SecureSession& session() const { return session_; }

 private:
  std::unique_ptr<net::ByteStream> inner_;
  SecureSession session_;
  Instrumentation* instrumentation_;
  Bytes pending_;
};

std::unique_ptr<SecureStream> connect_secure(std::unique_ptr<net::ByteStream> transport,
                                             const PeerIdentity& me,
                                             const TrustSet& trusted, Duration timeout,
                                             Instrumentation* instrumentation = nullptr);

// Server-side wrapper: runs the responder handshake on each accepted stream.
std::function<std::unique_ptr<net::ByteStream>(std::unique_ptr<net::ByteStream>)>
responder_wrapper(PeerIdentity me, TrustSet trusted, Duration timeout);

}  // namespace tzplc::securechan

#endif  // TZPLC_SECURECHAN_CHANNEL_H_
