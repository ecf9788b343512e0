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

#include "tzplc/runtime/network.h"

namespace tzplc::runtime {

void NormalWorldNetwork::interpose(const net::Endpoint& endpoint, std::string link,
                                   net::Framing framing, net::FrameMutator mutator) {
  std::lock_guard lock(mu_);
  taps_[endpoint.to_string()] = {std::move(link), framing, std::move(mutator)};
}

void NormalWorldNetwork::clear() {
  std::lock_guard lock(mu_);
  taps_.clear();
  capture_->clear();
}

std::unique_ptr<net::ByteStream> NormalWorldNetwork::connect(const net::Endpoint& endpoint,
                                                             Duration timeout) {
  std::unique_ptr<net::ByteStream> stream = net::tcp_connect(endpoint, timeout);
  std::lock_guard lock(mu_);
  auto it = taps_.find(endpoint.to_string());
  if (it != taps_.end()) {
    return std::make_unique<net::TappedStream>(std::move(stream), it->second.link,
                                               it->second.framing, it->second.mutator,
                                               capture_);
  }
  return stream;
}

}  // namespace tzplc::runtime
