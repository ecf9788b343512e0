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

#include "tzplc/testbed/testbed.h"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <random>

#include "tzplc/runtime/ta.h"
#include "tzplc/securechan/channel.h"
#include "tzplc/worldsim/manifest.h"

namespace tzplc::testbed {

using runtime::RuntimeErrc;
using runtime::RuntimeError;

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kTank: return "tank";
    case ScenarioKind::kGenerator: return "generator";
    case ScenarioKind::kLoopback: return "loopback";
  }
  return "?";
}

ScenarioKind scenario_from_string(std::string_view name) {
  if (name == "tank") return ScenarioKind::kTank;
  if (name == "generator") return ScenarioKind::kGenerator;
  if (name == "loopback") return ScenarioKind::kLoopback;
  throw RuntimeError(RuntimeErrc::kConfigError, "unknown scenario '" + std::string(name) + "'");
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError(RuntimeErrc::kConfigError, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, ByteSpan data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw RuntimeError(RuntimeErrc::kConfigError, "cannot write " + path.string());
}

Keys derive_keys(std::uint64_t seed, std::size_t slaves) {
  Rng rng(derive_seed(seed, "provisioning"));
  auto key = [&rng] {
    Bytes k(32);
    for (auto& b : k) b = static_cast<std::uint8_t>(rng());
    return k;
  };
  Keys keys;
  keys.authority_seed = key();
  keys.device_secret = key();
  keys.plc_seed = key();
  for (std::size_t i = 0; i < slaves; ++i) keys.slave_seeds.push_back(key());
  return keys;
}

Bytes authority_public_key(const Keys& keys) {
  return securechan::identity_from_seed("authority", keys.authority_seed).public_key;
}

namespace {

logic::LocatedAddress bit(logic::IoDirection dir, std::uint32_t index) {
  return {dir, logic::IoWidth::kBit, index};
}

logic::LocatedAddress word(logic::IoDirection dir, std::uint32_t index) {
  return {dir, logic::IoWidth::kWord, index};
}

constexpr auto kIn = logic::IoDirection::kInput;
constexpr auto kOut = logic::IoDirection::kOutput;

}  // namespace

std::vector<runtime::SlaveBinding> scenario_bindings(
    ScenarioKind kind, const plant::Scenario& scenario,
    const std::vector<plant::SlaveEndpoint>& endpoints) {
  const auto& specs = scenario.slaves();
  std::vector<std::vector<runtime::PointMap>> maps(specs.size());
  switch (kind) {
    case ScenarioKind::kTank:
      maps[0] = {{bit(kIn, 0), 0}, {bit(kIn, 1), 1}};
      maps[1] = {{bit(kIn, 2), 0}};
      maps[2] = {{bit(kOut, 0), 0}};
      maps[3] = {{bit(kOut, 1), 0}};
      break;
    case ScenarioKind::kGenerator:
      maps[0] = {{word(kIn, 0), 0}};
      maps[1] = {{word(kIn, 1), 0}};
      maps[2] = {{bit(kOut, 0), 0}};
      maps[3] = {{bit(kOut, 1), 0}};
      break;
    case ScenarioKind::kLoopback: {
      std::size_t pairs = specs.size() / 2;
      for (std::size_t i = 0; i < pairs; ++i) {
        maps[i] = {{bit(kIn, static_cast<std::uint32_t>(i)), 0}};
        maps[pairs + i] = {{bit(kOut, static_cast<std::uint32_t>(i)), 0}};
      }
      break;
    }
  }
  std::vector<runtime::SlaveBinding> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    runtime::SlaveBinding b;
    b.name = specs[i].name;
    b.role = specs[i].role == plant::SlaveRole::kSensor ? runtime::BindingRole::kSensor
                                                        : runtime::BindingRole::kActuator;
    if (i < endpoints.size()) b.endpoint = endpoints[i].endpoint;
    b.unit = specs[i].unit;
    b.map = maps[i];
    out.push_back(std::move(b));
  }
  return out;
}

std::unique_ptr<plant::Scenario> make_scenario(const TestbedConfig& config) {
  switch (config.scenario) {
    case ScenarioKind::kTank: {
      plant::TankConfig c;
      c.seed = config.seed;
      return std::make_unique<plant::TankScenario>(c);
    }
    case ScenarioKind::kGenerator:
      return std::make_unique<plant::GeneratorScenario>(
          plant::GeneratorScenario::seeded(config.seed));
    case ScenarioKind::kLoopback:
      if (config.pairs == 0) throw RuntimeError(RuntimeErrc::kConfigError, "pairs must be > 0");
      return std::make_unique<plant::LoopbackScenario>(
          plant::LoopbackConfig{config.pairs, config.loopback_period, config.seed});
  }
  throw RuntimeError(RuntimeErrc::kConfigError, "unknown scenario");
}

Testbed::Testbed(TestbedConfig config, runtime::RuntimeHooks hooks)
    : config_(std::move(config)), hooks_(std::move(hooks)) {
  if (config_.clock == ClockMode::kVirtual) {
    clock_ = std::make_unique<VirtualClock>();
  } else {
    clock_ = std::make_unique<WallClock>();
  }
  scenario_ = make_scenario(config_);
  keys_ = derive_keys(config_.seed, scenario_->slaves().size());

  if (config_.state_dir.empty()) {
    std::random_device rd;
    state_dir_ = std::filesystem::temp_directory_path() /
                 ("tzplc-" + to_hex(Bytes{static_cast<std::uint8_t>(rd()),
                                          static_cast<std::uint8_t>(rd()),
                                          static_cast<std::uint8_t>(rd()),
                                          static_cast<std::uint8_t>(rd())}));
    owns_state_dir_ = true;
  } else {
    state_dir_ = config_.state_dir;
  }
  std::filesystem::create_directories(state_dir_);

  if (config_.program) {
    program_ = *config_.program;
  } else if (config_.scenario == ScenarioKind::kLoopback) {
    program_ = plant::loopback_program(config_.pairs);
  } else {
    program_ = std::string(bundled_program(config_.scenario));
  }
  Bytes token;
  put_u64(token, derive_seed(config_.seed, "canary"));
  canary_ = "canary-" + to_hex(token);
  program_ += "\n(* build " + canary_ + " *)\n";

  auto plc = securechan::identity_from_seed("plc", keys_.plc_seed);
  std::vector<securechan::PeerIdentity> slave_ids;
  for (std::size_t i = 0; i < scenario_->slaves().size(); ++i) {
    slave_ids.push_back(
        securechan::identity_from_seed(scenario_->slaves()[i].name, keys_.slave_seeds[i]));
  }

  plant::ExposeOptions expose;
  if (config_.clock == ClockMode::kWall) expose.one_way_delay = config_.one_way_delay;
  expose.base_port = config_.base_port;
  if (config_.mode == runtime::Mode::kEnhanced) {
    securechan::TrustSet trust_plc;
    trust_plc.add(plc);
    for (const auto& id : slave_ids) {
      expose.wrappers.push_back(
          securechan::responder_wrapper(id, trust_plc, config_.slave_timeout));
    }
  }
  slaves_ = plant::expose_slaves(*scenario_, expose);

  bindings_ = scenario_bindings(config_.scenario, *scenario_, slaves_.endpoints());
  for (std::size_t i = 0; i < bindings_.size(); ++i) {
    bindings_[i].peer_public_key = slave_ids[i].public_key;
  }
  network_ = std::make_shared<runtime::NormalWorldNetwork>();

  if (config_.mode == runtime::Mode::kBaseline) {
    write_file(deployment_path(), config_.deployment ? *config_.deployment : to_bytes(program_));
  } else {
    worldsim::WorldConfig wc;
    wc.round_trip_latency = config_.world_switch;
    wc.supplicant_timeout = config_.supplicant_timeout;
    wc.authority_public_key = authority_public_key(keys_);
    wc.device_secret = keys_.device_secret;
    wc.ledger_path = state_dir_ / "ledger.txt";
    wc.store_path = state_dir_ / "secure_store.json";
    world_ = std::make_unique<worldsim::WorldSimulator>(wc, *clock_);
    runtime::register_plc_tas(*world_);
    world_->set_socket_connector(network_);
    write_file(deployment_path(), config_.deployment
                                      ? *config_.deployment
                                      : build_manifest(config_.ta_version, program_));
  }
}

Testbed::~Testbed() {
  scada_.reset();
  runtime_.reset();
  world_.reset();
  slaves_.stop();
  if (owns_state_dir_) {
    std::error_code ec;
    std::filesystem::remove_all(state_dir_, ec);
  }
}

std::filesystem::path Testbed::deployment_path() const {
  return state_dir_ / (config_.mode == runtime::Mode::kBaseline ? "plc.st" : "plc.ta");
}

std::optional<net::Endpoint> Testbed::scada_endpoint() const {
  if (!scada_) return std::nullopt;
  return scada_->endpoint();
}

worldsim::Uuid plc_ta_uuid(std::uint64_t seed) {
  return worldsim::Uuid::from_seed(derive_seed(seed, "plc-ta"));
}

worldsim::Uuid Testbed::ta_uuid() const { return plc_ta_uuid(config_.seed); }

Bytes build_plc_ta(const TestbedConfig& config, const std::vector<runtime::SlaveBinding>& bindings,
                   const std::string& program, std::uint32_t version, ByteSpan authority_seed,
                   ByteSpan device_public_key) {
  if (config.mode == runtime::Mode::kBaseline) {
    throw RuntimeError(RuntimeErrc::kConfigError, "baseline runs without a TA");
  }
  runtime::TaPayload payload;
  payload.program = program;
  payload.shape = runtime::shape_from_bindings(bindings);
  payload.slave_timeout = config.slave_timeout;
  if (config.mode == runtime::Mode::kEnhanced) {
    payload.bindings = bindings;
    payload.identity_seed = derive_keys(config.seed, bindings.size()).plc_seed;
  }
  auto image = runtime::make_ta_image(config.mode, payload);
  auto manifest = worldsim::build_manifest(image, plc_ta_uuid(config.seed), version,
                                           device_public_key, authority_seed);
  return worldsim::encode_manifest(manifest);
}

Bytes Testbed::build_manifest(std::uint32_t version, const std::string& program) const {
  return build_plc_ta(config_, bindings_, program, version, keys_.authority_seed,
                      worldsim::device_public_key(keys_.device_secret));
}

std::vector<runtime::SlaveBinding> planned_bindings(const TestbedConfig& config) {
  auto scenario = make_scenario(config);
  Keys keys = derive_keys(config.seed, scenario->slaves().size());
  std::vector<plant::SlaveEndpoint> endpoints;
  if (config.base_port != 0) {
    for (std::size_t i = 0; i < scenario->slaves().size(); ++i) {
      endpoints.push_back({scenario->slaves()[i].name, scenario->slaves()[i].role,
                           {"127.0.0.1", static_cast<std::uint16_t>(config.base_port + i)}});
    }
  }
  auto bindings = scenario_bindings(config.scenario, *scenario, endpoints);
  for (std::size_t i = 0; i < bindings.size(); ++i) {
    bindings[i].peer_public_key =
        securechan::identity_from_seed(bindings[i].name, keys.slave_seeds[i]).public_key;
  }
  return bindings;
}

std::vector<std::pair<std::string, Bytes>> Testbed::state_files() const {
  std::vector<std::pair<std::string, Bytes>> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(state_dir_)) {
    if (!entry.is_regular_file()) continue;
    out.emplace_back(entry.path().filename().string(), read_file(entry.path()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

RunResult Testbed::run() {
  RunResult result;
  runtime::ScanConfig sc;
  sc.mode = config_.mode;
  sc.interval = config_.interval;
  sc.cycle_limit = config_.cycles;
  sc.slaves = bindings_;
  sc.slave_timeout = config_.slave_timeout;
  sc.latency = config_.latency;
  sc.latency.seed = derive_seed(config_.seed, "latency");

  runtime::Deployment deployment;
  runtime::RuntimeHooks hooks = hooks_;
  std::unique_ptr<plant::WallStepper> stepper;
  if (config_.clock == ClockMode::kVirtual) {
    plant::Scenario* scenario = scenario_.get();
    Duration dt = config_.interval;
    auto user = hooks.cycle_end;
    hooks.cycle_end = [scenario, dt, user](std::uint64_t n) {
      scenario->step(dt);
      if (user) user(n);
    };
  }

  try {
    if (config_.mode == runtime::Mode::kBaseline) {
      Bytes src = read_file(deployment_path());
      deployment.program_source.assign(src.begin(), src.end());
    } else {
      deployment.manifest = read_file(deployment_path());
    }
    runtime_ = std::make_unique<runtime::Runtime>(
        sc, deployment, runtime::RuntimeEnv{clock_.get(), network_.get(), world_.get()},
        hooks);
    if (config_.scada) {
      modbus::ServerOptions so;
      so.bind = {"127.0.0.1", 0};
      scada_ = modbus::Server::start(
          std::make_shared<runtime::ScadaHandler>(runtime_->snapshot_source()), so);
    }
    if (config_.clock == ClockMode::kWall) {
      stepper = std::make_unique<plant::WallStepper>(*scenario_, config_.interval);
    }
    result.summary = runtime_->run([&result](const CycleReport& r) {
      result.reports.push_back(r);
    });
  } catch (const Error& e) {
    result.error = e.what();
    result.error_name = std::string(e.name());
    result.summary.cycles = result.reports.size();
  }
  if (stepper) stepper->stop();
  result.write_log = scenario_->write_log().bytes();
  if (world_) result.trace = world_->trace();
  if (runtime_) result.accesses = runtime_->accesses();
  return result;
}

}  // namespace tzplc::testbed
