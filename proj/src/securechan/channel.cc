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

#include "tzplc/securechan/channel.h"

#include <sodium.h>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace tzplc::securechan {

std::string_view to_string(ChanErrc code) {
  switch (code) {
    case ChanErrc::kPeerNotTrusted:
      return "PeerNotTrusted";
    case ChanErrc::kHandshakeTampered:
      return "HandshakeTampered";
    case ChanErrc::kTransportClosed:
      return "TransportClosed";
    case ChanErrc::kSequenceExhausted:
      return "SequenceExhausted";
    case ChanErrc::kAuthFailed:
      return "AuthFailed";
    case ChanErrc::kReplay:
      return "Replay";
    case ChanErrc::kTruncated:
      return "Truncated";
    case ChanErrc::kBadKey:
      return "BadKey";
  }
  return "ChannelError";
}

namespace {

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) throw std::runtime_error("libsodium init failed");
  }
};

void ensure_sodium() { static SodiumInit init; }

constexpr std::uint8_t kHello = 0x01;
constexpr std::uint8_t kReply = 0x02;
constexpr std::uint8_t kFinish = 0x03;
constexpr std::size_t kHelloSize = 1 + 3 * kKeySize;
constexpr std::size_t kReplySize = 1 + 3 * kKeySize + kSignatureSize;
constexpr std::size_t kFinishSize = 1 + kSignatureSize;
constexpr std::string_view kResponderLabel = "tzplc/securechan/v1 responder";
constexpr std::string_view kInitiatorLabel = "tzplc/securechan/v1 initiator";

[[noreturn]] void tampered(const std::string& what) {
  throw ChanError(ChanErrc::kHandshakeTampered, what);
}

std::array<std::uint8_t, 64> signing_key(const PeerIdentity& id) {
  if (id.private_key.size() != kKeySize) {
    throw ChanError(ChanErrc::kBadKey, "identity '" + id.name + "' has no private key");
  }
  std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
  std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
  crypto_sign_seed_keypair(pk.data(), sk.data(), id.private_key.data());
  return sk;
}

Bytes transcript_hash(std::string_view label, ByteSpan a, ByteSpan b) {
  Bytes out(crypto_generichash_BYTES);
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, out.size());
  crypto_generichash_update(&st, reinterpret_cast<const std::uint8_t*>(label.data()),
                            label.size());
  crypto_generichash_update(&st, a.data(), a.size());
  crypto_generichash_update(&st, b.data(), b.size());
  crypto_generichash_final(&st, out.data(), out.size());
  return out;
}

Bytes sign(const PeerIdentity& me, ByteSpan message) {
  auto sk = signing_key(me);
  Bytes sig(kSignatureSize);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), sk.data());
  sodium_memzero(sk.data(), sk.size());
  return sig;
}

bool verify(ByteSpan public_key, ByteSpan message, ByteSpan sig) {
  return crypto_sign_verify_detached(sig.data(), message.data(), message.size(),
                                     public_key.data()) == 0;
}

void send_message(net::ByteStream& t, ByteSpan body) {
  Bytes framed;
  put_u32(framed, static_cast<std::uint32_t>(body.size()));
  append(framed, body);
  t.write_all(framed);
}

Bytes receive_message(net::ByteStream& t, std::size_t expected, std::uint8_t type,
                      Duration timeout) {
  Bytes len(4);
  t.read_exact(len, timeout);
  if (get_u32(len, 0) != expected) tampered("unexpected handshake message length");
  Bytes body(expected);
  t.read_exact(body, timeout);
  if (body[0] != type) tampered("unexpected handshake message type");
  return body;
}

SessionKeys derive_keys(ByteSpan my_eph_secret, ByteSpan peer_eph_public,
                        ByteSpan transcript, Role role) {
  std::array<std::uint8_t, crypto_scalarmult_BYTES> shared{};
  if (crypto_scalarmult(shared.data(), my_eph_secret.data(), peer_eph_public.data()) !=
      0) {
    tampered("degenerate ephemeral key");
  }
  std::array<std::uint8_t, 64> okm{};
  crypto_generichash(okm.data(), okm.size(), transcript.data(), transcript.size(),
                     shared.data(), shared.size());
  sodium_memzero(shared.data(), shared.size());
  SessionKeys keys;
  auto i2r = okm.begin();
  auto r2i = okm.begin() + kKeySize;
  if (role == Role::kInitiator) {
    std::copy_n(i2r, kKeySize, keys.send.begin());
    std::copy_n(r2i, kKeySize, keys.recv.begin());
  } else {
    std::copy_n(r2i, kKeySize, keys.send.begin());
    std::copy_n(i2r, kKeySize, keys.recv.begin());
  }
  sodium_memzero(okm.data(), okm.size());
  return keys;
}

struct Ephemeral {
  std::array<std::uint8_t, crypto_scalarmult_SCALARBYTES> secret{};
  std::array<std::uint8_t, crypto_scalarmult_BYTES> public_key{};
  std::array<std::uint8_t, kKeySize> nonce{};

  Ephemeral() {
    randombytes_buf(secret.data(), secret.size());
    crypto_scalarmult_base(public_key.data(), secret.data());
    randombytes_buf(nonce.data(), nonce.size());
  }
  ~Ephemeral() { sodium_memzero(secret.data(), secret.size()); }
};

SecureSession run_initiator(net::ByteStream& t, const PeerIdentity& me,
                            const TrustSet& trusted, Duration timeout) {
  Ephemeral eph;
  Bytes hello{kHello};
  append(hello, eph.public_key);
  append(hello, eph.nonce);
  append(hello, me.public_key);
  send_message(t, hello);

  Bytes reply = receive_message(t, kReplySize, kReply, timeout);
  ByteSpan r(reply);
  ByteSpan peer_eph = r.subspan(1, kKeySize);
  ByteSpan peer_id = r.subspan(1 + 2 * kKeySize, kKeySize);
  ByteSpan peer_sig = r.subspan(1 + 3 * kKeySize, kSignatureSize);
  Bytes signed_part =
      transcript_hash(kResponderLabel, hello, r.first(1 + 3 * kKeySize));
  if (!verify(peer_id, signed_part, peer_sig)) tampered("responder signature invalid");
  const PeerIdentity* peer = trusted.find(peer_id);
  if (peer == nullptr) {
    throw ChanError(ChanErrc::kPeerNotTrusted, "responder key not in trust set");
  }

  Bytes transcript = transcript_hash(kInitiatorLabel, hello, reply);
  Bytes finish{kFinish};
  append(finish, sign(me, transcript));
  send_message(t, finish);
  return SecureSession(derive_keys(eph.secret, peer_eph, transcript, Role::kInitiator),
                       *peer);
}

SecureSession run_responder(net::ByteStream& t, const PeerIdentity& me,
                            const TrustSet& trusted, Duration timeout) {
  Bytes hello = receive_message(t, kHelloSize, kHello, timeout);
  ByteSpan h(hello);
  ByteSpan peer_eph = h.subspan(1, kKeySize);
  ByteSpan peer_id = h.subspan(1 + 2 * kKeySize, kKeySize);

  Ephemeral eph;
  Bytes reply{kReply};
  append(reply, eph.public_key);
  append(reply, eph.nonce);
  append(reply, me.public_key);
  append(reply, sign(me, transcript_hash(kResponderLabel, hello, reply)));
  send_message(t, reply);

  Bytes finish = receive_message(t, kFinishSize, kFinish, timeout);
  Bytes transcript = transcript_hash(kInitiatorLabel, hello, reply);
  if (!verify(peer_id, transcript, ByteSpan(finish).subspan(1))) {
    tampered("initiator signature invalid");
  }
  const PeerIdentity* peer = trusted.find(peer_id);
  if (peer == nullptr) {
    throw ChanError(ChanErrc::kPeerNotTrusted, "initiator key not in trust set");
  }
  return SecureSession(derive_keys(eph.secret, peer_eph, transcript, Role::kResponder),
                       *peer);
}

std::array<std::uint8_t, crypto_aead_chacha20poly1305_ietf_NPUBBYTES> nonce_for(
    std::uint64_t seq) {
  std::array<std::uint8_t, crypto_aead_chacha20poly1305_ietf_NPUBBYTES> nonce{};
  for (int i = 0; i < 8; ++i) {
    nonce[nonce.size() - 1 - i] = static_cast<std::uint8_t>(seq >> (8 * i));
  }
  return nonce;
}

}  // namespace

PeerIdentity identity_from_seed(std::string name, ByteSpan seed) {
  ensure_sodium();
  if (seed.size() != kKeySize) {
    throw ChanError(ChanErrc::kBadKey, "identity seed must be 32 bytes");
  }
  std::array<std::uint8_t, crypto_sign_PUBLICKEYBYTES> pk{};
  std::array<std::uint8_t, crypto_sign_SECRETKEYBYTES> sk{};
  crypto_sign_seed_keypair(pk.data(), sk.data(), seed.data());
  sodium_memzero(sk.data(), sk.size());
  return {std::move(name), Bytes(pk.begin(), pk.end()), Bytes(seed.begin(), seed.end())};
}

PeerIdentity generate_identity(std::string name, Rng& rng) {
  Bytes seed(kKeySize);
  for (auto& b : seed) b = static_cast<std::uint8_t>(rng());
  return identity_from_seed(std::move(name), seed);
}

TrustSet::TrustSet(std::vector<PeerIdentity> peers) {
  for (const auto& p : peers) add(p);
}

const PeerIdentity* TrustSet::find(ByteSpan public_key) const {
  for (const auto& p : peers_) {
    if (std::equal(p.public_key.begin(), p.public_key.end(), public_key.begin(),
                   public_key.end())) {
      return &p;
    }
  }
  return nullptr;
}

SecureSession::SecureSession(SessionKeys keys, PeerIdentity peer, std::uint64_t last_sent,
                             std::uint64_t last_received)
    : keys_(keys),
      peer_(std::move(peer)),
      last_sent_(last_sent),
      last_received_(last_received) {
  ensure_sodium();
}

Bytes SecureSession::seal(ByteSpan plaintext) {
  if (plaintext.size() > kMaxPlaintext) {
    throw ChanError(ChanErrc::kTruncated, "plaintext exceeds record limit");
  }
  if (last_sent_ == std::numeric_limits<std::uint64_t>::max()) {
    throw ChanError(ChanErrc::kSequenceExhausted, "send sequence exhausted");
  }
  std::uint64_t seq = ++last_sent_;
  Bytes record;
  record.reserve(kRecordHeaderSize + plaintext.size() + kTagSize);
  put_u32(record, static_cast<std::uint32_t>(8 + plaintext.size() + kTagSize));
  put_u64(record, seq);
  record.resize(kRecordHeaderSize + plaintext.size() + kTagSize);
  auto nonce = nonce_for(seq);
  unsigned long long clen = 0;
  crypto_aead_chacha20poly1305_ietf_encrypt(
      record.data() + kRecordHeaderSize, &clen, plaintext.data(), plaintext.size(),
      record.data(), kRecordHeaderSize, nullptr, nonce.data(), keys_.send.data());
  return record;
}

Bytes SecureSession::open(ByteSpan record) {
  if (record.size() < kRecordHeaderSize + kTagSize) {
    throw ChanError(ChanErrc::kTruncated, "record shorter than header and tag");
  }
  if (get_u32(record, 0) != record.size() - 4) {
    throw ChanError(ChanErrc::kAuthFailed, "record length field mismatch");
  }
  std::uint64_t seq = get_u64(record, 4);
  auto nonce = nonce_for(seq);
  Bytes plaintext(record.size() - kRecordHeaderSize - kTagSize);
  unsigned long long plen = 0;
  if (crypto_aead_chacha20poly1305_ietf_decrypt(
          plaintext.data(), &plen, nullptr, record.data() + kRecordHeaderSize,
          record.size() - kRecordHeaderSize, record.data(), kRecordHeaderSize,
          nonce.data(), keys_.recv.data()) != 0) {
    throw ChanError(ChanErrc::kAuthFailed, "record authentication failed");
  }
  if (seq <= last_received_) {
    throw ChanError(ChanErrc::kReplay, "sequence " + std::to_string(seq) +
                                           " not above " +
                                           std::to_string(last_received_));
  }
  last_received_ = seq;
  plaintext.resize(plen);
  return plaintext;
}

SecureSession handshake(net::ByteStream& transport, const PeerIdentity& me,
                        const TrustSet& trusted, Role role, Duration timeout) {
  ensure_sodium();
  try {
    return role == Role::kInitiator ? run_initiator(transport, me, trusted, timeout)
                                    : run_responder(transport, me, trusted, timeout);
  } catch (const net::NetError& e) {
    throw ChanError(ChanErrc::kTransportClosed, e.what());
  }
}

SecureStream::SecureStream(std::unique_ptr<net::ByteStream> inner,
                           SecureSession session, Instrumentation* instrumentation)
    : inner_(std::move(inner)),
      session_(std::move(session)),
      instrumentation_(instrumentation) {}

void SecureStream::write_all(ByteSpan data) {
  Bytes record;
  {
    ScopedPhase crypto(instrumentation_ ? instrumentation_->recorder : nullptr,
                       Phase::kChannelCrypto);
    record = session_.seal(data);
    if (instrumentation_) instrumentation_->charge_crypto(true);
  }
  inner_->write_all(record);
}

void SecureStream::read_exact(MutableByteSpan out, Duration timeout) {
  while (pending_.size() < out.size()) {
    Bytes record(4);
    inner_->read_exact(record, timeout);
    std::uint32_t len = get_u32(record, 0);
    if (len < 8 + kTagSize || len > 8 + kMaxPlaintext + kTagSize) {
      throw ChanError(ChanErrc::kAuthFailed, "record length out of bounds");
    }
    record.resize(4 + len);
    inner_->read_exact(MutableByteSpan(record).subspan(4), timeout);
    ScopedPhase crypto(instrumentation_ ? instrumentation_->recorder : nullptr,
                       Phase::kChannelCrypto);
    Bytes plain = session_.open(record);
    if (instrumentation_) instrumentation_->charge_crypto(false);
    append(pending_, plain);
  }
  std::copy_n(pending_.begin(), out.size(), out.begin());
  pending_.erase(pending_.begin(),
                 pending_.begin() + static_cast<std::ptrdiff_t>(out.size()));
}

std::unique_ptr<SecureStream> connect_secure(std::unique_ptr<net::ByteStream> transport,
                                             const PeerIdentity& me,
                                             const TrustSet& trusted, Duration timeout,
                                             Instrumentation* instrumentation) {
  SecureSession session = handshake(*transport, me, trusted, Role::kInitiator, timeout);
  return std::make_unique<SecureStream>(std::move(transport), std::move(session),
                                        instrumentation);
}

std::function<std::unique_ptr<net::ByteStream>(std::unique_ptr<net::ByteStream>)>
responder_wrapper(PeerIdentity me, TrustSet trusted, Duration timeout) {
  return [me = std::move(me), trusted = std::move(trusted),
          timeout](std::unique_ptr<net::ByteStream> raw) -> std::unique_ptr<net::ByteStream> {
    SecureSession session = handshake(*raw, me, trusted, Role::kResponder, timeout);
    return std::make_unique<SecureStream>(std::move(raw), std::move(session));
  };
}

}  // namespace tzplc::securechan
