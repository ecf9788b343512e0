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

#include "tzplc/common/cycle_report.h"

#include <nlohmann/json.hpp>

#include "tzplc/common/rng.h"

namespace tzplc {

namespace {

constexpr std::array<std::string_view, kPhaseCount> kPhaseNames = {
    "world_switch",     "channel_crypto", "network_wait",
    "slave_processing", "logic_exec",     "snapshot_publish",
};

}  // namespace

std::string_view phase_name(Phase p) {
  return kPhaseNames[static_cast<std::size_t>(p)];
}

std::optional<Phase> phase_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    if (kPhaseNames[i] == name) return static_cast<Phase>(i);
  }
  return std::nullopt;
}

Duration CycleReport::phase_sum() const {
  Duration sum{0};
  for (Duration d : phases) sum += d;
  return sum;
}

std::string to_json_line(const CycleReport& report) {
  nlohmann::ordered_json j;
  j["cycle"] = report.cycle_number;
  j["start_ns"] = report.start.count();
  j["total_ns"] = report.total.count();
  nlohmann::ordered_json phases;
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    phases[std::string(kPhaseNames[i])] = report.phases[i].count();
  }
  j["phases_ns"] = std::move(phases);
  j["overrun"] = report.overrun;
  j["stale_inputs"] = report.stale_inputs;
  j["actuator_errors"] = report.actuator_errors;
  return j.dump();
}

CycleReport cycle_report_from_json(std::string_view line) {
  auto j = nlohmann::json::parse(line);
  CycleReport r;
  r.cycle_number = j.at("cycle").get<std::uint64_t>();
  r.start = Duration(j.at("start_ns").get<std::int64_t>());
  r.total = Duration(j.at("total_ns").get<std::int64_t>());
  for (std::size_t i = 0; i < kPhaseCount; ++i) {
    r.phases[i] =
        Duration(j.at("phases_ns").at(std::string(kPhaseNames[i])).get<std::int64_t>());
  }
  r.overrun = j.at("overrun").get<bool>();
  r.stale_inputs = j.at("stale_inputs").get<bool>();
  r.actuator_errors = j.value("actuator_errors", 0u);
  return r;
}

void PhaseRecorder::reset() {
  times_.fill(Duration{0});
  stack_.clear();
  mark_ = clock_->now();
}

void PhaseRecorder::flush() {
  Duration now = clock_->now();
  if (!stack_.empty()) {
    times_[static_cast<std::size_t>(stack_.back())] += now - mark_;
  }
  mark_ = now;
}

void PhaseRecorder::enter(Phase p) {
  flush();
  stack_.push_back(p);
}

void PhaseRecorder::leave() {
  flush();
  if (!stack_.empty()) stack_.pop_back();
}

void Instrumentation::charge_transaction(bool secure_socket) {
  std::uint32_t index = transaction++;
  if (!virtual_time()) return;
  Duration jitter{0};
  if (latency.network_jitter.count() > 0) {
    std::uint64_t r = derive_seed(latency.seed, cycle, index);
    jitter = Duration(static_cast<std::int64_t>(
        r % static_cast<std::uint64_t>(latency.network_jitter.count() + 1)));
  }
  {
    ScopedPhase net(recorder, Phase::kNetworkWait);
    clock->charge(latency.network_rtt + jitter +
                  (secure_socket ? latency.secure_socket_overhead : Duration{0}));
  }
  ScopedPhase slave(recorder, Phase::kSlaveProcessing);
  clock->charge(latency.slave_processing);
}

void Instrumentation::charge_crypto(bool encrypt) {
  if (!virtual_time()) return;
  clock->charge(encrypt ? latency.encrypt_cost : latency.decrypt_cost);
}

void Instrumentation::charge_logic() {
  if (virtual_time()) clock->charge(latency.logic_exec);
}

void Instrumentation::charge_snapshot() {
  if (virtual_time()) clock->charge(latency.snapshot_publish);
}

}  // namespace tzplc
