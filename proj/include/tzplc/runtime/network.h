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

#ifndef TZPLC_RUNTIME_NETWORK_H_
#define TZPLC_RUNTIME_NETWORK_H_

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "tzplc/net/tap.h"
#include "tzplc/net/tcp.h"

namespace tzplc::runtime {

// The normal world's network stack. Every slave connection of the PLC,
// including the sockets a TA opens through the supplicant, is made here,
// which is where a normal-world attacker can interpose.
class NormalWorldNetwork final : public net::Connector {
 public:
  NormalWorldNetwork() : capture_(std::make_shared<net::CaptureLog>()) {}

  // Routes future connections to `endpoint` through a tap running
  // `mutator` (which may be empty: observe only).
  void interpose(const net::Endpoint& endpoint, std::string link, net::Framing framing,
                 net::FrameMutator mutator);
  void clear();

  std::shared_ptr<net::CaptureLog> capture() const { return capture_; }

  std::unique_ptr<net::ByteStream> connect(const net::Endpoint& endpoint,
                                           Duration timeout) override;

 private:
  struct Tap {
    std::string link;
    net::Framing framing;
    net::FrameMutator mutator;
  };

  mutable std::mutex mu_;
  std::map<std::string, Tap> taps_;
  std::shared_ptr<net::CaptureLog> capture_;
};

}  // namespace tzplc::runtime

#endif  // TZPLC_RUNTIME_NETWORK_H_
