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

#include "tzplc/runtime/snapshot.h"

#include <stdexcept>

namespace tzplc::runtime {

Bytes encode_snapshot(const Snapshot& s) {
  Bytes out;
  put_u64(out, s.cycle);
  put_u64(out, static_cast<std::uint64_t>(s.timestamp.count()));
  append(out, logic::encode_image(s.image));
  return out;
}

std::optional<Snapshot> decode_snapshot(ByteSpan bytes) {
  if (bytes.size() < 16) return std::nullopt;
  Snapshot s;
  s.cycle = get_u64(bytes, 0);
  s.timestamp = Duration(static_cast<std::int64_t>(get_u64(bytes, 8)));
  try {
    // The region may be larger than the snapshot; decode the exact prefix.
    ByteSpan body = bytes.subspan(16);
    if (body.size() < 8) return std::nullopt;
    logic::ImageShape shape{get_u16(body, 0), get_u16(body, 2), get_u16(body, 4),
                            get_u16(body, 6)};
    std::size_t len = snapshot_size(shape) - 16;
    if (body.size() < len) return std::nullopt;
    s.image = logic::decode_image(body.first(len));
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
  return s;
}

std::size_t snapshot_size(const logic::ImageShape& shape) {
  return 16 + 8 + (shape.input_bits + 7) / 8 + (shape.output_bits + 7) / 8 +
         2 * (shape.input_words + shape.output_words);
}

void SnapshotBoard::publish(Snapshot s) {
  std::lock_guard lock(mu_);
  latest_ = std::move(s);
}

std::optional<Snapshot> SnapshotBoard::latest() const {
  std::lock_guard lock(mu_);
  return latest_;
}

modbus::Pdu ScadaHandler::handle(std::uint8_t unit, const modbus::Pdu& request) {
  using namespace modbus;
  if (request.function != fc::kReadCoils && request.function != fc::kReadHoldingRegisters) {
    return exception_response(request.function, exc::kIllegalFunction);
  }
  auto snap = source_ ? source_() : std::nullopt;
  const logic::ProcessImage image = snap ? snap->image : logic::ProcessImage{};
  auto in_bits = image.input_bits.size();
  auto in_words = image.input_words.size();
  BankShape shape{static_cast<std::uint16_t>(kScadaInputOffset + in_bits), 0,
                  static_cast<std::uint16_t>(kScadaInputOffset + in_words), 0};
  // Outputs are at the bottom, inputs at the offset; anything else reads as
  // an illegal address.
  BankHandler bank(shape);
  bank.with_bank([&](RegisterBank& b) {
    if (!image.output_bits.empty()) b.write_coils(0, image.output_bits);
    if (!image.input_bits.empty()) b.write_coils(kScadaInputOffset, image.input_bits);
    if (!image.output_words.empty()) b.write_holding(0, image.output_words);
    if (!image.input_words.empty()) b.write_holding(kScadaInputOffset, image.input_words);
  });
  if (request.data.size() >= 4) {
    std::uint16_t start = get_u16(request.data, 0);
    std::uint16_t count = get_u16(request.data, 2);
    bool coils = request.function == fc::kReadCoils;
    std::size_t outputs = coils ? image.output_bits.size() : image.output_words.size();
    std::size_t inputs = coils ? in_bits : in_words;
    std::size_t end = static_cast<std::size_t>(start) + count;
    bool in_outputs = end <= outputs;
    bool in_inputs = start >= kScadaInputOffset && end <= kScadaInputOffset + inputs;
    if (count > 0 && !in_outputs && !in_inputs) {
      return exception_response(request.function, exc::kIllegalDataAddress);
    }
  }
  return bank.handle(unit, request);
}

}  // namespace tzplc::runtime
