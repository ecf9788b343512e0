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

#ifndef TZPLC_NET_PIPE_H_
#define TZPLC_NET_PIPE_H_

#include <memory>
#include <utility>

#include "tzplc/net/stream.h"

namespace tzplc::net {

// In-process duplex byte channel; both ends are thread-safe with respect to
// each other. Closing either end wakes blocked readers on both.
std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_pipe();

}  // namespace tzplc::net

#endif  // TZPLC_NET_PIPE_H_
