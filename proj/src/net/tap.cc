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

#include "tzplc/net/tap.h"

#include <algorithm>

namespace tzplc::net {

namespace {

constexpr std::uint32_t kMaxFrame = 1u << 20;

}  // namespace

void CaptureLog::record(CapturedFrame frame) {
  std::lock_guard lock(mu_);
  frames_.push_back(std::move(frame));
}

std::vector<CapturedFrame> CaptureLog::frames() const {
  std::lock_guard lock(mu_);
  return frames_;
}

std::size_t CaptureLog::mutated_count() const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(
      std::count_if(frames_.begin(), frames_.end(), [](const CapturedFrame& f) {
        return f.original != f.delivered;
      }));
}

void CaptureLog::clear() {
  std::lock_guard lock(mu_);
  frames_.clear();
}

TappedStream::TappedStream(std::unique_ptr<ByteStream> inner, std::string link,
                           Framing framing, FrameMutator mutator,
                           std::shared_ptr<CaptureLog> log)
    : inner_(std::move(inner)),
      link_(std::move(link)),
      framing_(framing),
      mutator_(std::move(mutator)),
      log_(std::move(log)) {}

void TappedStream::pass(Direction dir, Bytes& frame) {
  std::uint64_t index =
      dir == Direction::kToServer ? to_server_index_++ : to_client_index_++;
  Bytes original = frame;
  if (mutator_) mutator_(link_, dir, index, frame);
  if (log_) log_->record({link_, dir, index, std::move(original), frame});
}

void TappedStream::write_all(ByteSpan data) {
  Bytes frame(data.begin(), data.end());
  pass(Direction::kToServer, frame);
  inner_->write_all(frame);
}

void TappedStream::pull_frame(Duration timeout) {
  Bytes frame;
  std::size_t header = framing_ == Framing::kModbusTcp ? 6 : 4;
  frame.resize(header);
  inner_->read_exact(frame, timeout);
  std::uint32_t rest = framing_ == Framing::kModbusTcp ? get_u16(frame, 4)
                                                       : get_u32(frame, 0);
  if (rest > kMaxFrame) throw NetError(NetErrc::kClosed, "tap lost framing");
  frame.resize(header + rest);
  inner_->read_exact(MutableByteSpan(frame).subspan(header), timeout);
  pass(Direction::kToClient, frame);
  append(pending_, frame);
}

void TappedStream::read_exact(MutableByteSpan out, Duration timeout) {
  while (pending_.size() < out.size()) pull_frame(timeout);
  std::copy_n(pending_.begin(), out.size(), out.begin());
  pending_.erase(pending_.begin(),
                 pending_.begin() + static_cast<std::ptrdiff_t>(out.size()));
}

}  // namespace tzplc::net
