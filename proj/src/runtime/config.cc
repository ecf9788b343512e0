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

#include "tzplc/runtime/config.h"

#include <algorithm>
#include <set>

#include <nlohmann/json.hpp>

namespace tzplc::runtime {

using nlohmann::json;

std::string_view to_string(RuntimeErrc code) {
  switch (code) {
    case RuntimeErrc::kConfigError: return "ConfigError";
    case RuntimeErrc::kSlaveTimeout: return "SlaveTimeout";
    case RuntimeErrc::kTaFailure: return "TaFailure";
    case RuntimeErrc::kAddressUnknown: return "AddressUnknown";
  }
  return "RuntimeError";
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::kBaseline: return "baseline";
    case Mode::kMinimal: return "minimal";
    case Mode::kEnhanced: return "enhanced";
  }
  return "?";
}

Mode mode_from_string(std::string_view name) {
  if (name == "baseline") return Mode::kBaseline;
  if (name == "minimal") return Mode::kMinimal;
  if (name == "enhanced") return Mode::kEnhanced;
  throw RuntimeError(RuntimeErrc::kConfigError, "unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::kAuto: return "auto";
    case Channel::kPlain: return "plain";
    case Channel::kSecure: return "secure";
  }
  return "?";
}

Channel channel_from_string(std::string_view name) {
  if (name == "auto") return Channel::kAuto;
  if (name == "plain") return Channel::kPlain;
  if (name == "secure") return Channel::kSecure;
  throw RuntimeError(RuntimeErrc::kConfigError,
                     "unknown channel '" + std::string(name) + "'");
}

bool is_secure(const SlaveBinding& binding, Mode mode) {
  switch (binding.channel) {
    case Channel::kAuto: return mode == Mode::kEnhanced;
    case Channel::kPlain: return false;
    case Channel::kSecure: return true;
  }
  return false;
}

void validate(const ScanConfig& config) {
  auto fail = [](const std::string& what) {
    throw RuntimeError(RuntimeErrc::kConfigError, what);
  };
  if (config.interval.count() <= 0) fail("interval must be > 0");
  if (config.slave_timeout.count() <= 0) fail("slave timeout must be > 0");
  std::set<std::string> names;
  for (const auto& b : config.slaves) {
    if (b.name.empty()) fail("slave binding without a name");
    if (!names.insert(b.name).second) fail("duplicate slave '" + b.name + "'");
    if (b.map.empty()) fail(b.name + ": empty map");
    auto want = b.role == BindingRole::kSensor ? logic::IoDirection::kInput
                                               : logic::IoDirection::kOutput;
    for (const auto& p : b.map) {
      if (p.local.direction != want) {
        fail(b.name + ": " + p.local.to_string() +
             (b.role == BindingRole::kSensor ? " is not an input" : " is not an output"));
      }
    }
    if (b.channel == Channel::kSecure && config.mode != Mode::kEnhanced) {
      fail(b.name + ": secure links are only available in enhanced mode");
    }
    if (is_secure(b, config.mode) && b.peer_public_key.size() != 32) {
      fail(b.name + ": secure link needs a 32-byte peer_public_key");
    }
  }
}

logic::ImageShape shape_from_bindings(const std::vector<SlaveBinding>& bindings) {
  logic::ImageShape shape;
  auto grow = [](std::uint16_t& n, std::uint32_t index) {
    n = static_cast<std::uint16_t>(std::max<std::uint32_t>(n, index + 1));
  };
  for (const auto& b : bindings) {
    for (const auto& p : b.map) {
      bool in = p.local.direction == logic::IoDirection::kInput;
      if (p.local.width == logic::IoWidth::kBit) {
        grow(in ? shape.input_bits : shape.output_bits, p.local.index);
      } else {
        grow(in ? shape.input_words : shape.output_words, p.local.index);
      }
    }
  }
  return shape;
}

namespace {

Duration micros(const json& j) {
  return std::chrono::microseconds(j.get<std::int64_t>());
}

std::int64_t to_micros(Duration d) {
  return std::chrono::duration_cast<std::chrono::microseconds>(d).count();
}

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw RuntimeError(RuntimeErrc::kConfigError,
                       std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

SlaveBinding binding_from_json(const json& j) {
  SlaveBinding b;
  b.name = field<std::string>(j, "name");
  std::string role = field<std::string>(j, "role");
  if (role == "sensor") {
    b.role = BindingRole::kSensor;
  } else if (role == "actuator") {
    b.role = BindingRole::kActuator;
  } else {
    throw RuntimeError(RuntimeErrc::kConfigError, b.name + ": unknown role '" + role + "'");
  }
  b.endpoint.host = j.value("host", std::string("127.0.0.1"));
  b.endpoint.port = field<std::uint16_t>(j, "port");
  b.unit = j.value("unit", std::uint8_t{1});
  b.channel = channel_from_string(j.value("channel", std::string("auto")));
  for (const auto& m : field<json>(j, "map")) {
    std::string local = field<std::string>(m, "local");
    auto addr = logic::parse_address(local);
    if (!addr) {
      throw RuntimeError(RuntimeErrc::kConfigError,
                         b.name + ": bad located address '" + local + "'");
    }
    b.map.push_back({*addr, field<std::uint16_t>(m, "remote")});
  }
  if (j.contains("peer_public_key")) {
    try {
      b.peer_public_key = from_hex(j.at("peer_public_key").get<std::string>());
    } catch (const std::exception& e) {
      throw RuntimeError(RuntimeErrc::kConfigError, b.name + ": peer_public_key: " + e.what());
    }
  }
  return b;
}

json to_json(const SlaveBinding& b) {
  json map = json::array();
  for (const auto& p : b.map) map.push_back({{"local", p.local.to_string()}, {"remote", p.remote}});
  json j = {{"name", b.name},
            {"role", b.role == BindingRole::kSensor ? "sensor" : "actuator"},
            {"host", b.endpoint.host},
            {"port", b.endpoint.port},
            {"unit", b.unit},
            {"channel", std::string(to_string(b.channel))},
            {"map", map}};
  if (!b.peer_public_key.empty()) j["peer_public_key"] = to_hex(b.peer_public_key);
  return j;
}

std::vector<SlaveBinding> bindings_from_json(const json& j) {
  if (!j.is_array()) throw RuntimeError(RuntimeErrc::kConfigError, "slaves must be a list");
  std::vector<SlaveBinding> out;
  for (const auto& b : j) out.push_back(binding_from_json(b));
  return out;
}

json to_json(const std::vector<SlaveBinding>& bindings) {
  json out = json::array();
  for (const auto& b : bindings) out.push_back(to_json(b));
  return out;
}

LatencyModel latency_from_json(const json& j, LatencyModel d) {
  static const char* const kKeys[] = {
      "network_rtt_us", "network_jitter_us", "secure_socket_overhead_us", "slave_processing_us",
      "encrypt_us",     "decrypt_us",        "logic_exec_us",             "snapshot_publish_us"};
  if (!j.is_object()) throw RuntimeError(RuntimeErrc::kConfigError, "latency must be an object");
  for (const auto& item : j.items()) {
    if (std::find(std::begin(kKeys), std::end(kKeys), item.key()) == std::end(kKeys)) {
      throw RuntimeError(RuntimeErrc::kConfigError, "latency: unknown key '" + item.key() + "'");
    }
  }
  try {
    if (j.contains("network_rtt_us")) d.network_rtt = micros(j["network_rtt_us"]);
    if (j.contains("network_jitter_us")) d.network_jitter = micros(j["network_jitter_us"]);
    if (j.contains("secure_socket_overhead_us")) {
      d.secure_socket_overhead = micros(j["secure_socket_overhead_us"]);
    }
    if (j.contains("slave_processing_us")) d.slave_processing = micros(j["slave_processing_us"]);
    if (j.contains("encrypt_us")) d.encrypt_cost = micros(j["encrypt_us"]);
    if (j.contains("decrypt_us")) d.decrypt_cost = micros(j["decrypt_us"]);
    if (j.contains("logic_exec_us")) d.logic_exec = micros(j["logic_exec_us"]);
    if (j.contains("snapshot_publish_us")) d.snapshot_publish = micros(j["snapshot_publish_us"]);
  } catch (const json::exception& e) {
    throw RuntimeError(RuntimeErrc::kConfigError, std::string("latency: ") + e.what());
  }
  return d;
}

json to_json(const LatencyModel& l) {
  return {{"network_rtt_us", to_micros(l.network_rtt)},
          {"network_jitter_us", to_micros(l.network_jitter)},
          {"secure_socket_overhead_us", to_micros(l.secure_socket_overhead)},
          {"slave_processing_us", to_micros(l.slave_processing)},
          {"encrypt_us", to_micros(l.encrypt_cost)},
          {"decrypt_us", to_micros(l.decrypt_cost)},
          {"logic_exec_us", to_micros(l.logic_exec)},
          {"snapshot_publish_us", to_micros(l.snapshot_publish)}};
}

ScanConfig scan_config_from_json(const json& j) {
  ScanConfig c;
  try {
    if (j.contains("mode")) c.mode = mode_from_string(j["mode"].get<std::string>());
    if (j.contains("interval_us")) {
      c.interval = micros(j["interval_us"]);
    } else if (j.contains("interval_ms")) {
      c.interval = std::chrono::milliseconds(j["interval_ms"].get<std::int64_t>());
    }
    if (j.contains("cycles")) c.cycle_limit = j["cycles"].get<std::uint64_t>();
    if (j.contains("slave_timeout_us")) c.slave_timeout = micros(j["slave_timeout_us"]);
    if (j.contains("slaves")) c.slaves = bindings_from_json(j["slaves"]);
    if (j.contains("latency")) c.latency = latency_from_json(j["latency"]);
  } catch (const json::exception& e) {
    throw RuntimeError(RuntimeErrc::kConfigError, e.what());
  }
  validate(c);
  return c;
}

}  // namespace tzplc::runtime
