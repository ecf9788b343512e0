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

#ifndef TZPLC_NET_TAP_H_
#define TZPLC_NET_TAP_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tzplc/net/stream.h"

namespace tzplc::net {

// How a tap splits a byte stream into messages.
enum class Framing {
  kModbusTcp,       // MBAP header: length field at bytes 4..5 counts the rest
  kLengthPrefixed,  // 4-byte big-endian length, then that many bytes
};

enum class Direction { kToServer, kToClient };

struct CapturedFrame {
  std::string link;
  Direction direction;
  std::uint64_t index;  // per link and direction
  Bytes original;
  Bytes delivered;
};

// Receives every frame crossing a tapped link and may rewrite it in place.
using FrameMutator =
    std::function<void(const std::string& link, Direction, std::uint64_t index,
                       Bytes& frame)>;

// Everything a tap saw. Shared by all links of one interposer.
class CaptureLog {
 public:
  void record(CapturedFrame frame);
  std::vector<CapturedFrame> frames() const;
  // Number of frames whose delivered bytes differ from the original.
  std::size_t mutated_count() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::vector<CapturedFrame> frames_;
};

// Man-in-the-middle decorator over a client stream. It sits where a
// normal-world attacker sits: on the host network path, seeing and able to
// rewrite every message in both directions.
class TappedStream final : public ByteStream {
 public:
  TappedStream(std::unique_ptr<ByteStream> inner, std::string link, Framing framing,
               FrameMutator mutator, std::shared_ptr<CaptureLog> log);

  void write_all(ByteSpan data) override;
  void read_exact(MutableByteSpan out, Duration timeout) override;
  void close() override { inner_->close(); }

 private:
  void pull_frame(Duration timeout);
  void pass(Direction dir, Bytes& frame);

  std::unique_ptr<ByteStream> inner_;
  std::string link_;
  Framing framing_;
  FrameMutator mutator_;
  std::shared_ptr<CaptureLog> log_;
  Bytes pending_;
  std::uint64_t to_server_index_ = 0;
  std::uint64_t to_client_index_ = 0;
};

}  // namespace tzplc::net

#endif  // TZPLC_NET_TAP_H_
