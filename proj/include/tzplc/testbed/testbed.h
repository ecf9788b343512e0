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

#ifndef TZPLC_TESTBED_TESTBED_H_
#define TZPLC_TESTBED_TESTBED_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tzplc/modbus/server.h"
#include "tzplc/plant/plant.h"
#include "tzplc/runtime/network.h"
#include "tzplc/runtime/runtime.h"
#include "tzplc/worldsim/world.h"

namespace tzplc::testbed {

enum class ScenarioKind { kTank, kGenerator, kLoopback };

std::string_view to_string(ScenarioKind kind);
// Throws runtime kConfigError for unknown names.
ScenarioKind scenario_from_string(std::string_view name);

// The ST programs shipped in programs/.
std::string_view bundled_program(ScenarioKind kind);

struct TestbedConfig {
  runtime::Mode mode = runtime::Mode::kEnhanced;
  ScenarioKind scenario = ScenarioKind::kLoopback;
  std::size_t pairs = 1;  // loopback only
  std::uint64_t loopback_period = 0;
  std::uint64_t cycles = 100;
  std::uint64_t seed = 1;
  ClockMode clock = ClockMode::kVirtual;
  Duration interval = std::chrono::milliseconds(20);
  Duration world_switch = std::chrono::microseconds(280);
  // Injected by the slave servers on wall-clock runs only; virtual runs
  // charge latency.network_rtt instead.
  Duration one_way_delay = std::chrono::microseconds(600);
  LatencyModel latency;
  Duration slave_timeout = std::chrono::milliseconds(200);
  Duration supplicant_timeout = std::chrono::milliseconds(100);
  std::uint32_t ta_version = 1;
  // Ledger, secure store, program or manifest live here. Empty: a fresh
  // temporary directory removed with the testbed.
  std::filesystem::path state_dir;
  // Replaces the scenario's bundled program.
  std::optional<std::string> program;
  // Installed instead of the generated plc.st / plc.ta.
  std::optional<Bytes> deployment;
  // 0: ephemeral slave ports. Otherwise slave i listens on base_port + i,
  // which lets a TA be built before the installation exists.
  std::uint16_t base_port = 0;
  bool scada = false;
};

// Provisioning secrets, all derived from the run seed.
struct Keys {
  Bytes authority_seed;
  Bytes device_secret;
  Bytes plc_seed;
  std::vector<Bytes> slave_seeds;  // per scenario slave
};

Keys derive_keys(std::uint64_t seed, std::size_t slaves);
Bytes authority_public_key(const Keys& keys);

std::vector<runtime::SlaveBinding> scenario_bindings(ScenarioKind kind,
                                                     const plant::Scenario& scenario,
                                                     const std::vector<plant::SlaveEndpoint>&);

std::unique_ptr<plant::Scenario> make_scenario(const TestbedConfig& config);

// Bindings of the installation `config` describes, with slave public keys.
// Endpoints are only known when config.base_port is set.
std::vector<runtime::SlaveBinding> planned_bindings(const TestbedConfig& config);

worldsim::Uuid plc_ta_uuid(std::uint64_t seed);

// Signed manifest of the PLC TA for `config.mode` (minimal or enhanced).
// Throws runtime kConfigError in baseline mode, logic errors for bad source.
Bytes build_plc_ta(const TestbedConfig& config, const std::vector<runtime::SlaveBinding>& bindings,
                   const std::string& program, std::uint32_t version, ByteSpan authority_seed,
                   ByteSpan device_public_key);

struct RunResult {
  runtime::RunSummary summary;
  std::vector<CycleReport> reports;
  Bytes write_log;
  std::vector<worldsim::InvokeRecord> trace;
  std::vector<runtime::NormalWorldAccess> accesses;
  // Set when the run aborted (TaFailure and the like); `summary` then
  // counts the cycles completed before.
  std::optional<std::string> error;
  std::optional<std::string> error_name;
};

// One complete desk-scale installation: plant slaves on loopback TCP, the
// normal-world network, the world simulator with the PLC TA loaded (TEE
// modes) and a runtime. Single use: construct, optionally adjust, run().
class Testbed {
 public:
  explicit Testbed(TestbedConfig config, runtime::RuntimeHooks hooks = {});
  ~Testbed();
  Testbed(const Testbed&) = delete;
  Testbed& operator=(const Testbed&) = delete;

  const TestbedConfig& config() const { return config_; }
  plant::Scenario& scenario() { return *scenario_; }
  runtime::NormalWorldNetwork& network() { return *network_; }
  // Null in baseline mode.
  worldsim::WorldSimulator* world() { return world_.get(); }
  Clock& clock() { return *clock_; }
  const Keys& keys() const { return keys_; }
  const std::vector<runtime::SlaveBinding>& bindings() const { return bindings_; }
  const std::vector<plant::SlaveEndpoint>& endpoints() const { return slaves_.endpoints(); }
  const std::string& program() const { return program_; }
  // Token embedded in the program source.
  const std::string& canary() const { return canary_; }
  const std::filesystem::path& state_dir() const { return state_dir_; }
  // plc.st (baseline) or plc.ta (TEE modes).
  std::filesystem::path deployment_path() const;
  std::optional<net::Endpoint> scada_endpoint() const;

  // A manifest for this installation's TA uuid, signed by the authority.
  Bytes build_manifest(std::uint32_t version, const std::string& program) const;
  worldsim::Uuid ta_uuid() const;

  // Files of the state directory as the normal world sees them.
  std::vector<std::pair<std::string, Bytes>> state_files() const;

  // Loads the deployment from state_dir (so file tampering takes effect),
  // builds the runtime and runs config.cycles cycles.
  RunResult run();
  runtime::Runtime* runtime() { return runtime_.get(); }

 private:
  TestbedConfig config_;
  runtime::RuntimeHooks hooks_;
  std::unique_ptr<Clock> clock_;
  std::unique_ptr<plant::Scenario> scenario_;
  Keys keys_;
  plant::SlaveSet slaves_;
  std::shared_ptr<runtime::NormalWorldNetwork> network_;
  std::filesystem::path state_dir_;
  bool owns_state_dir_ = false;
  std::string program_;
  std::string canary_;
  std::vector<runtime::SlaveBinding> bindings_;
  std::unique_ptr<worldsim::WorldSimulator> world_;
  std::unique_ptr<runtime::Runtime> runtime_;
  std::unique_ptr<modbus::Server> scada_;
};

// Reads a whole file; throws runtime kConfigError when it cannot.
Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteSpan data);

}  // namespace tzplc::testbed

#endif  // TZPLC_TESTBED_TESTBED_H_
