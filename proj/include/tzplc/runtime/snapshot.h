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

#ifndef TZPLC_RUNTIME_SNAPSHOT_H_
#define TZPLC_RUNTIME_SNAPSHOT_H_

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <string>

#include "tzplc/common/clock.h"
#include "tzplc/logic/image.h"
#include "tzplc/modbus/bank.h"

namespace tzplc::runtime {

struct Snapshot {
  std::uint64_t cycle = 0;
  Duration timestamp{0};
  logic::ProcessImage image;

  bool operator==(const Snapshot&) const = default;
};

// u64 cycle | i64 timestamp ns | encode_image(image)
Bytes encode_snapshot(const Snapshot& snapshot);
// nullopt for an empty or malformed buffer.
std::optional<Snapshot> decode_snapshot(ByteSpan bytes);

inline constexpr const char* kSnapshotRegion = "plc.snapshot";
std::size_t snapshot_size(const logic::ImageShape& shape);

// Latest-snapshot holder for the baseline, where the scan loop publishes
// straight into normal-world memory.
class SnapshotBoard {
 public:
  void publish(Snapshot s);
  std::optional<Snapshot> latest() const;

 private:
  mutable std::mutex mu_;
  std::optional<Snapshot> latest_;
};

using SnapshotSource = std::function<std::optional<Snapshot>()>;

// Read-only SCADA view of the latest snapshot. Coils and holding registers
// from 0 are the output bits and words; from kScadaInputOffset the inputs.
// Write functions answer exception 0x01.
inline constexpr std::uint16_t kScadaInputOffset = 1000;

class ScadaHandler final : public modbus::RequestHandler {
 public:
  explicit ScadaHandler(SnapshotSource source) : source_(std::move(source)) {}
  modbus::Pdu handle(std::uint8_t unit, const modbus::Pdu& request) override;

 private:
  SnapshotSource source_;
};

}  // namespace tzplc::runtime

#endif  // TZPLC_RUNTIME_SNAPSHOT_H_
