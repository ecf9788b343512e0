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

#ifndef TZPLC_RUNTIME_RUNTIME_H_
#define TZPLC_RUNTIME_RUNTIME_H_

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tzplc/common/cycle_report.h"
#include "tzplc/logic/eval.h"
#include "tzplc/logic/image.h"
#include "tzplc/runtime/config.h"
#include "tzplc/runtime/io.h"
#include "tzplc/runtime/snapshot.h"
#include "tzplc/worldsim/world.h"

namespace tzplc::runtime {

// What normal-world code can reach at a hook point. `inputs` is null when
// the cycle's inputs never enter the normal world (enhanced); `shm` is null
// in the baseline, `board` outside it.
struct NormalWorldBuffers {
  std::uint64_t cycle = 0;
  logic::ProcessImage* inputs = nullptr;
  worldsim::SharedMemoryRegion* shm = nullptr;
  SnapshotBoard* board = nullptr;
};

// One hook call as recorded by the runtime.
struct NormalWorldAccess {
  std::uint64_t cycle = 0;
  std::string hook;
  bool inputs_exposed = false;
};

// Installed before run() and left alone while it runs.
struct RuntimeHooks {
  std::function<void(std::uint64_t cycle)> cycle_start;
  // After the sensor reads of a normal-world scan, before the logic runs;
  // in enhanced mode, right before the EXEC invoke.
  std::function<void(NormalWorldBuffers&)> before_logic;
  std::function<void(NormalWorldBuffers&)> after_publish;
  // After the cycle's report; drives lockstep plant stepping.
  std::function<void(std::uint64_t cycle)> cycle_end;
};

struct RuntimeEnv {
  Clock* clock = nullptr;
  // The normal world's network stack. Enhanced mode leaves it to the world
  // simulator's socket connector.
  net::Connector* network = nullptr;
  worldsim::WorldSimulator* world = nullptr;
};

struct Deployment {
  // Baseline: ST source as found on the normal-world file system.
  std::string program_source;
  // Minimal / enhanced: the signed TA manifest handed to the loader.
  Bytes manifest;
};

struct RunSummary {
  std::uint64_t cycles = 0;
  std::uint64_t stale_cycles = 0;
  std::uint64_t overruns = 0;
  std::vector<LinkEvent> link_events;  // normal-world links only
};

// The PLC scan loop. Per cycle: read sensors, run the logic, write
// actuators, publish a snapshot; where each step runs depends on the mode.
class Runtime {
 public:
  Runtime(ScanConfig config, Deployment deployment, RuntimeEnv env, RuntimeHooks hooks = {});
  ~Runtime();
  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  // Runs until the cycle limit or stop(). Errors: ConfigError, TaFailure
  // (the run aborts; reports of completed cycles were already delivered),
  // plus load errors of the world simulator and logic errors in baseline.
  RunSummary run(const std::function<void(const CycleReport&)>& on_report = {});
  // Ends the run after the current cycle. Safe from any thread.
  void stop() { stop_ = true; }

  const logic::ImageShape& shape() const { return shape_; }
  // Reads the latest published snapshot from normal-world memory.
  SnapshotSource snapshot_source() const;
  std::vector<NormalWorldAccess> accesses() const;

 private:
  void start();
  void finish();
  void cycle(std::uint64_t n, CycleReport& report);
  void call_hook(const std::function<void(NormalWorldBuffers&)>& hook, const char* name,
                 NormalWorldBuffers& buffers);
  [[noreturn]] void ta_failure(const std::exception& e);

  ScanConfig config_;
  Deployment deployment_;
  RuntimeEnv env_;
  RuntimeHooks hooks_;
  logic::ImageShape shape_;

  PhaseRecorder recorder_;
  // Passed to every invoke and captured by TA links; must stay put.
  Instrumentation instrumentation_;

  std::optional<logic::BoundProgram> bound_;
  std::optional<logic::ProgramState> state_;
  std::unique_ptr<SlaveLinks> links_;
  std::optional<worldsim::TaSession> session_;
  std::shared_ptr<worldsim::SharedMemoryRegion> shm_;
  SnapshotBoard board_;
  bool initialized_ = false;

  std::atomic<bool> stop_{false};
  mutable std::mutex access_mu_;
  std::vector<NormalWorldAccess> accesses_;
};

// CycleReport JSON-lines sink.
std::function<void(const CycleReport&)> json_lines_writer(std::ostream& out);

}  // namespace tzplc::runtime

#endif  // TZPLC_RUNTIME_RUNTIME_H_
