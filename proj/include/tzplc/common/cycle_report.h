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

#ifndef TZPLC_COMMON_CYCLE_REPORT_H_
#define TZPLC_COMMON_CYCLE_REPORT_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tzplc/common/clock.h"

namespace tzplc {

enum class Phase : std::size_t {
  kWorldSwitch = 0,
  kChannelCrypto,
  kNetworkWait,
  kSlaveProcessing,
  kLogicExec,
  kSnapshotPublish,
};

inline constexpr std::size_t kPhaseCount = 6;

std::string_view phase_name(Phase p);
std::optional<Phase> phase_from_name(std::string_view name);

using PhaseTimes = std::array<Duration, kPhaseCount>;

// One scan cycle, as seen by the bench.
struct CycleReport {
  std::uint64_t cycle_number = 0;
  Duration start{0};
  Duration total{0};
  PhaseTimes phases{};
  bool overrun = false;
  bool stale_inputs = false;
  std::uint32_t actuator_errors = 0;

  Duration phase(Phase p) const { return phases[static_cast<std::size_t>(p)]; }
  Duration phase_sum() const;
  Duration residual() const { return total - phase_sum(); }
};

// JSON-lines encoding (one object, no trailing newline).
std::string to_json_line(const CycleReport& report);
CycleReport cycle_report_from_json(std::string_view line);

// Exclusive-time phase accounting. Entering a nested phase pauses the
// enclosing one, so the per-phase totals never double count and their sum is
// bounded by the cycle's wall (or virtual) duration.
class PhaseRecorder {
 public:
  explicit PhaseRecorder(const Clock& clock) : clock_(&clock) {}

  void reset();
  void enter(Phase p);
  void leave();

  const PhaseTimes& times() const { return times_; }

 private:
  void flush();

  const Clock* clock_;
  PhaseTimes times_{};
  std::vector<Phase> stack_;
  Duration mark_{0};
};

class ScopedPhase {
 public:
  ScopedPhase(PhaseRecorder* recorder, Phase p) : recorder_(recorder) {
    if (recorder_ != nullptr) recorder_->enter(p);
  }
  ~ScopedPhase() {
    if (recorder_ != nullptr) recorder_->leave();
  }
  ScopedPhase(const ScopedPhase&) = delete;
  ScopedPhase& operator=(const ScopedPhase&) = delete;

 private:
  PhaseRecorder* recorder_;
};

// Costs injected when running on a virtual clock. On a wall clock only the
// world switch is injected (by the world simulator); everything else is
// measured.
struct LatencyModel {
  Duration network_rtt = std::chrono::microseconds(1200);
  // Uniform jitter in [0, network_jitter] added per transaction, drawn from
  // a seeded stream keyed by (cycle, transaction index).
  Duration network_jitter{0};
  // Per-transaction forwarding cost of a secure-world socket, charged as
  // network wait. Only applies to links opened from inside a TA.
  Duration secure_socket_overhead = std::chrono::microseconds(2900);
  Duration slave_processing = std::chrono::microseconds(250);
  Duration encrypt_cost = std::chrono::microseconds(60);
  Duration decrypt_cost = std::chrono::microseconds(50);
  Duration logic_exec = std::chrono::microseconds(5);
  Duration snapshot_publish = std::chrono::microseconds(10);
  std::uint64_t seed = 0;
};

// Bundles the clock, the phase recorder of the current cycle and the
// injection model. Passed across the world boundary as an instrumentation
// hook; it carries no functional state.
struct Instrumentation {
  Clock* clock = nullptr;
  PhaseRecorder* recorder = nullptr;
  LatencyModel latency;
  // Current cycle and per-cycle transaction counter, for seeded jitter.
  std::uint64_t cycle = 0;
  std::uint32_t transaction = 0;

  bool virtual_time() const { return clock != nullptr && clock->is_virtual(); }

  // Charges one Modbus transaction's network and slave costs (virtual only).
  void charge_transaction(bool secure_socket);
  void charge_crypto(bool encrypt);
  void charge_logic();
  void charge_snapshot();
};

}  // namespace tzplc

#endif  // TZPLC_COMMON_CYCLE_REPORT_H_
