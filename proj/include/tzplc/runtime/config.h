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

#ifndef TZPLC_RUNTIME_CONFIG_H_
#define TZPLC_RUNTIME_CONFIG_H_

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tzplc/common/bytes.h"
#include "tzplc/common/cycle_report.h"
#include "tzplc/common/error.h"
#include "tzplc/logic/image.h"
#include "tzplc/logic/program.h"
#include "tzplc/net/stream.h"

namespace tzplc::runtime {

enum class RuntimeErrc {
  kConfigError,
  kSlaveTimeout,
  kTaFailure,
  kAddressUnknown,
};

constexpr std::string_view module_name(RuntimeErrc) { return "runtime"; }
std::string_view to_string(RuntimeErrc code);

using RuntimeError = CodedError<RuntimeErrc>;

enum class Mode { kBaseline, kMinimal, kEnhanced };

std::string_view to_string(Mode mode);
// Throws kConfigError for unknown names.
Mode mode_from_string(std::string_view name);

// kAuto resolves to secure in enhanced mode and plain otherwise.
enum class Channel { kAuto, kPlain, kSecure };

std::string_view to_string(Channel channel);
Channel channel_from_string(std::string_view name);

enum class BindingRole { kSensor, kActuator };

// One located variable wired to a remote data item. Bit locations map to
// coils, word locations to holding registers.
struct PointMap {
  logic::LocatedAddress local;
  std::uint16_t remote = 0;

  bool operator==(const PointMap&) const = default;
};

struct SlaveBinding {
  std::string name;
  BindingRole role = BindingRole::kSensor;
  net::Endpoint endpoint;
  std::uint8_t unit = 1;
  Channel channel = Channel::kAuto;
  std::vector<PointMap> map;
  // Expected Ed25519 key of the slave on secure links.
  Bytes peer_public_key;

  bool operator==(const SlaveBinding&) const = default;
};

struct ScanConfig {
  Mode mode = Mode::kBaseline;
  Duration interval = std::chrono::milliseconds(20);
  std::optional<std::uint64_t> cycle_limit;
  std::vector<SlaveBinding> slaves;
  // Per-transaction reply timeout; a miss leaves the inputs stale.
  Duration slave_timeout = std::chrono::milliseconds(200);
  LatencyModel latency;
};

// Checks the invariants that do not need the program: interval > 0,
// sensor maps only to %I and actuator maps only to %Q, unique names, and
// no secure link outside enhanced mode. Throws kConfigError.
void validate(const ScanConfig& config);

bool is_secure(const SlaveBinding& binding, Mode mode);

// Smallest image covering every mapped location.
logic::ImageShape shape_from_bindings(const std::vector<SlaveBinding>& bindings);

// JSON forms. Durations are integer microseconds with a `_us` suffix
// (`interval_ms` is accepted as well); see docs/config.md.
SlaveBinding binding_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SlaveBinding& binding);
std::vector<SlaveBinding> bindings_from_json(const nlohmann::json& j);
nlohmann::json to_json(const std::vector<SlaveBinding>& bindings);
LatencyModel latency_from_json(const nlohmann::json& j, LatencyModel defaults = {});
nlohmann::json to_json(const LatencyModel& latency);
// Keys: mode, interval_us | interval_ms, cycles, slave_timeout_us, slaves,
// latency. Missing keys keep their defaults; unknown modes or channels are
// kConfigError. The result is validated.
ScanConfig scan_config_from_json(const nlohmann::json& j);

}  // namespace tzplc::runtime

#endif  // TZPLC_RUNTIME_CONFIG_H_
