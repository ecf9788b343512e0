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

#include "tzplc/net/pipe.h"

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>

namespace tzplc::net {

namespace {

struct Channel {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::uint8_t> data;
  bool closed = false;
};

class PipeEnd final : public ByteStream {
 public:
  PipeEnd(std::shared_ptr<Channel> in, std::shared_ptr<Channel> out)
      : in_(std::move(in)), out_(std::move(out)) {}
  ~PipeEnd() override { close(); }

  void write_all(ByteSpan data) override {
    std::lock_guard lock(out_->mu);
    if (out_->closed) throw NetError(NetErrc::kClosed, "pipe closed");
    out_->data.insert(out_->data.end(), data.begin(), data.end());
    out_->cv.notify_all();
  }

  void read_exact(MutableByteSpan out, Duration timeout) override {
    std::unique_lock lock(in_->mu);
    bool ready = in_->cv.wait_for(lock, timeout, [&] {
      return in_->data.size() >= out.size() || in_->closed;
    });
    if (in_->data.size() < out.size()) {
      if (in_->closed) throw NetError(NetErrc::kClosed, "pipe closed");
      if (!ready) throw NetError(NetErrc::kTimeout, "pipe read timed out");
    }
    for (auto& b : out) {
      b = in_->data.front();
      in_->data.pop_front();
    }
  }

  void close() override {
    for (auto* ch : {in_.get(), out_.get()}) {
      std::lock_guard lock(ch->mu);
      ch->closed = true;
      ch->cv.notify_all();
    }
  }

 private:
  std::shared_ptr<Channel> in_;
  std::shared_ptr<Channel> out_;
};

}  // namespace

std::pair<std::unique_ptr<ByteStream>, std::unique_ptr<ByteStream>> make_pipe() {
  auto a_to_b = std::make_shared<Channel>();
  auto b_to_a = std::make_shared<Channel>();
  return {std::make_unique<PipeEnd>(b_to_a, a_to_b),
          std::make_unique<PipeEnd>(a_to_b, b_to_a)};
}

}  // namespace tzplc::net
