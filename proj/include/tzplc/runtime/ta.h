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

#ifndef TZPLC_RUNTIME_TA_H_
#define TZPLC_RUNTIME_TA_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tzplc/runtime/config.h"
#include "tzplc/worldsim/world.h"

namespace tzplc::runtime {

// TA kinds registered with the world simulator.
inline constexpr const char* kLogicOnlyKind = "plc.logic_only";
inline constexpr const char* kScanCycleKind = "plc.scan_cycle";

// Key of the PLC's channel identity in the scan-cycle TA's secure storage.
inline constexpr const char* kIdentityKey = "plc_identity";

// What the build step puts inside the (sealed) TA body.
struct TaPayload {
  std::string program;
  logic::ImageShape shape;
  // Enhanced only: the slave list and the PLC's channel identity seed, so
  // the secure world never reads normal-world configuration at runtime.
  std::vector<SlaveBinding> bindings;
  Bytes identity_seed;
  Duration slave_timeout = std::chrono::milliseconds(200);
};

// Minimal -> logic-only TA exporting CONTROL_LOGIC; enhanced -> scan-cycle
// TA exporting INIT, EXEC, EXIT. Compiles the program first, so syntax and
// binding errors surface at build time. Throws kConfigError for baseline.
worldsim::TaImage make_ta_image(Mode mode, const TaPayload& payload);
TaPayload payload_from_image(const worldsim::TaImage& image);

void register_plc_tas(worldsim::WorldSimulator& world);

// Invoke parameter layouts.
//   CONTROL_LOGIC: [0] memref_in encode_inputs(image), [1] value_in cycle
//                  (a = low, b = high 32 bits), [2] memref_out
//                  encode_outputs(result)
//   EXEC:          [0] value_in cycle, [1] value_out a = stale inputs,
//                  b = failed actuator writes
worldsim::Param cycle_param(std::uint64_t cycle);
std::uint64_t cycle_from_param(const worldsim::Param& p);

}  // namespace tzplc::runtime

#endif  // TZPLC_RUNTIME_TA_H_
