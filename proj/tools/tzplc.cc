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

// tzplc: command-line front end.
//
//   tzplc keygen --seed 7 --out keys/
//   tzplc build-ta --config configs/tank.json --source programs/tank.st --out plc.ta
//   tzplc run --config configs/tank.json --mode enhanced --cycles 100
//   tzplc attack --vector a --mode minimal
//   tzplc bench --mode enhanced --pairs 1,2,4,8 --cycles 1000 --clock virtual
//   tzplc matrix --modes minimal,enhanced
//
// Flags override config-file values. Exit codes are listed in kExitCodes.

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "tzplc/attacks/attacks.h"
#include "tzplc/bench/bench.h"
#include "tzplc/logic/eval.h"
#include "tzplc/runtime/config.h"
#include "tzplc/runtime/runtime.h"
#include "tzplc/securechan/channel.h"
#include "tzplc/testbed/testbed.h"
#include "tzplc/worldsim/manifest.h"

namespace tzplc::cli {
namespace {

using runtime::Mode;
using testbed::TestbedConfig;

enum class CliErrc { kConfigError, kSigningError, kIoError };

std::string_view module_name(CliErrc) { return "cli"; }

std::string_view to_string(CliErrc code) {
  switch (code) {
    case CliErrc::kConfigError: return "ConfigError";
    case CliErrc::kSigningError: return "SigningError";
    case CliErrc::kIoError: return "IoError";
  }
  return "CliError";
}

using CliError = CodedError<CliErrc>;

constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitOther = 10;

const std::map<std::string, int, std::less<>> kExitCodes = {
    {"ConfigError", kExitUsage},
    {"AddressUnknown", kExitUsage},
    {"MatrixMismatch", kExitMismatch},
    {"BadSignature", 4},
    {"VersionRollback", 4},
    {"MalformedManifest", 4},
    {"UnknownTaKind", 4},
    {"DuplicateUuid", 4},
    {"SyntaxError", 5},
    {"TypeError", 5},
    {"DuplicateLocation", 5},
    {"AddressOutOfRange", 5},
    {"ArithmeticOverflow", 5},
    {"TaFailure", 6},
    {"SlaveTimeout", 6},
    {"SupplicantDown", 6},
    {"TaPanic", 6},
    {"InsufficientCycles", 7},
    {"DegenerateFit", 7},
    {"IoError", 8},
    {"StorageIo", 8},
    {"SigningError", 9},
};

int exit_code_for(std::string_view name) {
  auto it = kExitCodes.find(name);
  return it == kExitCodes.end() ? kExitOther : it->second;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(CliErrc::kIoError, "cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw CliError(CliErrc::kIoError, "cannot write " + path.string());
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ClockMode clock_from_string(std::string_view name) {
  if (name == "virtual") return ClockMode::kVirtual;
  if (name == "wall") return ClockMode::kWall;
  throw CliError(CliErrc::kConfigError, "clock must be virtual or wall, got '" +
                                            std::string(name) + "'");
}

// Everything a config file may hold, plus command-line overrides.
struct Settings {
  TestbedConfig testbed;
  std::optional<std::filesystem::path> program_path;
  std::vector<Mode> bench_modes = {Mode::kEnhanced};
  std::vector<std::size_t> bench_pairs = {1, 2, 4, 8};
  std::uint64_t bench_cycles = bench::kMinCycles;
  std::vector<Mode> matrix_modes = {Mode::kMinimal, Mode::kEnhanced};
  std::vector<attacks::Vector> matrix_vectors = {std::begin(attacks::kAllVectors),
                                                 std::end(attacks::kAllVectors)};
  nlohmann::json attack = nlohmann::json::object();
};

const std::vector<std::string> kConfigKeys = {
    "mode",      "scenario",      "pairs",          "loopback_period", "cycles",
    "seed",      "clock",         "interval_ms",    "world_switch_us", "one_way_delay_us",
    "latency",   "slave_timeout_ms", "supplicant_timeout_ms", "ta_version", "state_dir",
    "program",   "base_port",     "scada",          "bench",           "matrix",
    "attack"};

template <typename T>
T field(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

Settings settings_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw CliError(CliErrc::kConfigError, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kConfigKeys.begin(), kConfigKeys.end(), key) == kConfigKeys.end()) {
      throw CliError(CliErrc::kConfigError, "unknown config key '" + key + "'");
    }
  }
  Settings s;
  TestbedConfig& t = s.testbed;
  try {
    if (j.contains("mode")) t.mode = runtime::mode_from_string(j["mode"].get<std::string>());
    if (j.contains("scenario")) {
      t.scenario = testbed::scenario_from_string(j["scenario"].get<std::string>());
    }
    t.pairs = field(j, "pairs", t.pairs);
    t.loopback_period = field(j, "loopback_period", t.loopback_period);
    t.cycles = field(j, "cycles", t.cycles);
    t.seed = field(j, "seed", t.seed);
    if (j.contains("clock")) t.clock = clock_from_string(j["clock"].get<std::string>());
    t.interval = std::chrono::milliseconds(field<std::int64_t>(j, "interval_ms", 20));
    t.world_switch = std::chrono::microseconds(field<std::int64_t>(j, "world_switch_us", 280));
    t.one_way_delay =
        std::chrono::microseconds(field<std::int64_t>(j, "one_way_delay_us", 600));
    if (j.contains("latency")) t.latency = runtime::latency_from_json(j["latency"]);
    t.slave_timeout = std::chrono::milliseconds(field<std::int64_t>(j, "slave_timeout_ms", 200));
    t.supplicant_timeout =
        std::chrono::milliseconds(field<std::int64_t>(j, "supplicant_timeout_ms", 100));
    t.ta_version = field(j, "ta_version", t.ta_version);
    if (j.contains("state_dir")) t.state_dir = j["state_dir"].get<std::string>();
    if (j.contains("program")) s.program_path = j["program"].get<std::string>();
    t.base_port = field(j, "base_port", t.base_port);
    t.scada = field(j, "scada", t.scada);
    if (j.contains("bench")) {
      const auto& b = j["bench"];
      if (b.contains("modes")) {
        s.bench_modes.clear();
        for (const auto& m : b["modes"]) {
          s.bench_modes.push_back(runtime::mode_from_string(m.get<std::string>()));
        }
      }
      if (b.contains("pairs")) s.bench_pairs = b["pairs"].get<std::vector<std::size_t>>();
      s.bench_cycles = field(b, "cycles", s.bench_cycles);
    }
    if (j.contains("matrix")) {
      const auto& m = j["matrix"];
      if (m.contains("modes")) {
        s.matrix_modes.clear();
        for (const auto& x : m["modes"]) {
          s.matrix_modes.push_back(runtime::mode_from_string(x.get<std::string>()));
        }
      }
      if (m.contains("vectors")) {
        s.matrix_vectors.clear();
        for (const auto& x : m["vectors"]) {
          s.matrix_vectors.push_back(attacks::vector_from_string(x.get<std::string>()));
        }
      }
    }
    if (j.contains("attack")) s.attack = j["attack"];
  } catch (const nlohmann::json::exception& e) {
    throw CliError(CliErrc::kConfigError, e.what());
  }
  return s;
}

// Command-line values; empty means "keep the config's".
struct Flags {
  std::string config;
  std::string mode;
  std::string pairs;
  std::optional<std::uint64_t> cycles;
  std::optional<std::uint64_t> seed;
  std::string clock;
  std::string out;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--mode", f.mode, "baseline, minimal or enhanced (bench: comma list)");
  cmd->add_option("--pairs", f.pairs, "loopback sensor/actuator pairs (bench: comma list)");
  cmd->add_option("--cycles", f.cycles, "scan cycles");
  cmd->add_option("--seed", f.seed, "seed for every random choice");
  cmd->add_option("--clock", f.clock, "virtual or wall");
  cmd->add_option("--out", f.out, "output file or directory");
}

std::size_t parse_count(const std::string& text) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw CliError(CliErrc::kConfigError, "not a count: '" + text + "'");
  }
}

// Loads the config, applies overrides, validates. Nothing starts before
// this returns.
Settings resolve(const Flags& f, bool list_modes) {
  Settings s = f.config.empty() ? Settings{}
                                : settings_from_json([&] {
                                    try {
                                      return nlohmann::json::parse(read_text(f.config));
                                    } catch (const nlohmann::json::parse_error& e) {
                                      throw CliError(CliErrc::kConfigError,
                                                     f.config + ": " + e.what());
                                    }
                                  }());
  TestbedConfig& t = s.testbed;
  if (!f.mode.empty()) {
    auto modes = split(f.mode);
    if (modes.empty()) throw CliError(CliErrc::kConfigError, "empty --mode");
    if (!list_modes && modes.size() != 1) {
      throw CliError(CliErrc::kConfigError, "--mode takes a single mode here");
    }
    t.mode = runtime::mode_from_string(modes[0]);
    s.bench_modes.clear();
    for (const auto& m : modes) s.bench_modes.push_back(runtime::mode_from_string(m));
    s.matrix_modes = s.bench_modes;
  }
  if (!f.pairs.empty()) {
    auto pairs = split(f.pairs);
    if (pairs.empty()) throw CliError(CliErrc::kConfigError, "empty --pairs");
    s.bench_pairs.clear();
    for (const auto& p : pairs) s.bench_pairs.push_back(parse_count(p));
    t.pairs = s.bench_pairs.front();
    if (!list_modes && pairs.size() != 1) {
      throw CliError(CliErrc::kConfigError, "--pairs takes a single count here");
    }
    t.scenario = testbed::ScenarioKind::kLoopback;
  }
  if (f.cycles) {
    t.cycles = *f.cycles;
    s.bench_cycles = *f.cycles;
  }
  if (f.seed) t.seed = *f.seed;
  if (!f.clock.empty()) t.clock = clock_from_string(f.clock);
  if (s.program_path) t.program = read_text(*s.program_path);

  if (t.pairs == 0) throw CliError(CliErrc::kConfigError, "pairs must be > 0");
  for (std::size_t p : s.bench_pairs) {
    if (p == 0) throw CliError(CliErrc::kConfigError, "pairs must be > 0");
  }
  if (t.interval.count() <= 0) throw CliError(CliErrc::kConfigError, "interval must be > 0");
  return s;
}

void emit(const Flags& f, const std::string& text) {
  if (f.out.empty()) {
    std::cout << text;
  } else {
    write_text(f.out, text);
  }
}

Bytes read_hex_key(const std::string& path, std::size_t size, CliErrc errc) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const CliError&) {
    throw CliError(errc, "cannot read key file " + path);
  }
  Bytes bytes;
  try {
    bytes = from_hex(text);
  } catch (const std::invalid_argument&) {
  }
  if (bytes.size() != size) {
    throw CliError(errc, path + " does not hold a " + std::to_string(size) + "-byte hex key");
  }
  return bytes;
}

// ---------------------------------------------------------------------------

int cmd_keygen(const Flags& f) {
  Settings s = resolve(f, false);
  if (f.out.empty()) throw CliError(CliErrc::kConfigError, "keygen needs --out DIR");
  std::filesystem::path dir = f.out;
  std::filesystem::create_directories(dir);
  auto keys = testbed::derive_keys(s.testbed.seed, 0);
  write_text(dir / "authority.key", to_hex(keys.authority_seed) + "\n");
  write_text(dir / "authority.pub", to_hex(testbed::authority_public_key(keys)) + "\n");
  write_text(dir / "device.key", to_hex(keys.device_secret) + "\n");
  write_text(dir / "device.pub",
             to_hex(worldsim::device_public_key(keys.device_secret)) + "\n");
  std::cout << "wrote authority.key authority.pub device.key device.pub to " << dir.string()
            << "\n";
  return 0;
}

struct BuildFlags {
  std::string source;
  std::string key;
  std::string device_pub;
  std::optional<std::uint32_t> version;
};

int cmd_build_ta(const Flags& f, const BuildFlags& b) {
  Settings s = resolve(f, false);
  TestbedConfig& t = s.testbed;
  if (f.out.empty()) throw CliError(CliErrc::kConfigError, "build-ta needs --out FILE");
  if (t.mode == Mode::kBaseline) {
    throw CliError(CliErrc::kConfigError, "build-ta needs --mode minimal or enhanced");
  }
  if (t.mode == Mode::kEnhanced && t.base_port == 0) {
    throw CliError(CliErrc::kConfigError,
                   "enhanced TAs embed slave endpoints; set base_port in the config");
  }
  std::string program = !b.source.empty() ? read_text(b.source)
                        : t.program       ? *t.program
                        : t.scenario == testbed::ScenarioKind::kLoopback
                            ? plant::loopback_program(t.pairs)
                            : std::string(testbed::bundled_program(t.scenario));
  auto keys = testbed::derive_keys(t.seed, 0);
  Bytes authority = b.key.empty() ? keys.authority_seed
                                  : read_hex_key(b.key, 32, CliErrc::kSigningError);
  Bytes device = b.device_pub.empty() ? worldsim::device_public_key(keys.device_secret)
                                      : read_hex_key(b.device_pub, 32, CliErrc::kSigningError);
  auto bindings = testbed::planned_bindings(t);
  // Surface source errors with their position before anything is signed.
  logic::compile(program, runtime::shape_from_bindings(bindings));
  std::uint32_t version = b.version.value_or(t.ta_version);
  Bytes manifest = testbed::build_plc_ta(t, bindings, program, version, authority, device);
  testbed::write_file(f.out, manifest);
  std::cout << "TA " << testbed::plc_ta_uuid(t.seed).to_string() << " version " << version
            << " (" << runtime::to_string(t.mode) << ") -> " << f.out << "\n";
  return 0;
}

int cmd_plant(const Flags& f) {
  Settings s = resolve(f, false);
  TestbedConfig& t = s.testbed;
  auto scenario = testbed::make_scenario(t);
  plant::ExposeOptions expose;
  expose.base_port = t.base_port;
  if (t.clock == ClockMode::kWall) expose.one_way_delay = t.one_way_delay;
  auto slaves = plant::expose_slaves(*scenario, expose);
  nlohmann::json j = {{"scenario", testbed::to_string(t.scenario)}, {"seed", t.seed}};
  for (const auto& e : slaves.endpoints()) {
    j["slaves"].push_back({{"name", e.name},
                           {"role", e.role == plant::SlaveRole::kSensor ? "sensor" : "actuator"},
                           {"host", e.endpoint.host},
                           {"port", e.endpoint.port}});
  }
  std::cout << j.dump() << std::endl;
  if (t.clock == ClockMode::kWall) {
    plant::WallStepper stepper(*scenario, t.interval);
    std::this_thread::sleep_for(t.interval * static_cast<std::int64_t>(t.cycles));
    stepper.stop();
  } else {
    for (std::uint64_t i = 0; i < t.cycles; ++i) scenario->step(t.interval);
  }
  slaves.stop();
  nlohmann::json done = {{"steps", t.cycles}, {"actuator_writes", scenario->write_log().size()}};
  std::cout << done.dump() << "\n";
  return 0;
}

int cmd_run(const Flags& f, const std::string& deploy, const std::string& state_dir) {
  Settings s = resolve(f, false);
  TestbedConfig& t = s.testbed;
  if (!deploy.empty()) t.deployment = testbed::read_file(deploy);
  if (!state_dir.empty()) t.state_dir = state_dir;
  testbed::Testbed tb(t);
  auto result = tb.run();
  std::string lines;
  for (const auto& r : result.reports) lines += to_json_line(r) + "\n";
  emit(f, lines);
  nlohmann::json summary = {{"mode", runtime::to_string(t.mode)},
                            {"cycles", result.summary.cycles},
                            {"stale_cycles", result.summary.stale_cycles},
                            {"overruns", result.summary.overruns},
                            {"actuator_writes", tb.scenario().write_log().size()}};
  if (result.error_name) summary["error"] = *result.error_name;
  std::cerr << summary.dump() << "\n";
  if (result.error) {
    std::cerr << "error: " << *result.error << "\n";
    return exit_code_for(*result.error_name);
  }
  return 0;
}

struct AttackFlags {
  std::string vector;
  std::string target;
  std::optional<std::int32_t> value;
  std::string mutation;
  std::optional<std::uint64_t> from_cycle;
  std::optional<std::uint64_t> to_cycle;
  std::uint64_t kill_after = 5;
  bool restore = false;
};

int cmd_attack(const Flags& f, const AttackFlags& a) {
  Settings s = resolve(f, false);
  std::string vector = !a.vector.empty() ? a.vector : s.attack.value("vector", std::string());
  if (vector.empty()) throw CliError(CliErrc::kConfigError, "attack needs --vector");

  attacks::AttackOutcome outcome;
  attacks::Verdict expected;
  if (vector == "kill_supplicant") {
    outcome = attacks::kill_supplicant(s.testbed, {a.kill_after, a.restore});
    expected = s.testbed.mode == Mode::kBaseline ? attacks::Verdict::kNotApplicable
               : a.restore                       ? attacks::Verdict::kBlocked
                                                 : attacks::Verdict::kSucceeded;
  } else {
    nlohmann::json j = s.attack;
    j["vector"] = vector;
    j["mode"] = runtime::to_string(s.testbed.mode);
    j["seed"] = s.testbed.seed;
    j["scenario"] = testbed::to_string(s.testbed.scenario);
    j["pairs"] = s.testbed.pairs;
    if (!f.config.empty() || f.cycles) j["cycles"] = s.testbed.cycles;
    if (!a.target.empty()) j["target"] = a.target;
    if (a.value) j["value"] = *a.value;
    if (!a.mutation.empty()) j["mutation"] = a.mutation;
    if (a.from_cycle) j["from_cycle"] = *a.from_cycle;
    if (a.to_cycle) j["to_cycle"] = *a.to_cycle;
    attacks::AttackScenario scenario = attacks::attack_from_json(j);
    scenario.testbed.clock = s.testbed.clock;
    scenario.testbed.latency = s.testbed.latency;
    if (s.testbed.program) scenario.testbed.program = s.testbed.program;
    expected = scenario.expected;
    outcome = attacks::run_attack(scenario);
  }
  nlohmann::json out = attacks::to_json(outcome);
  out["expected"] = attacks::to_string(expected);
  emit(f, out.dump(2) + "\n");
  if (outcome.verdict != expected) {
    std::cerr << "verdict " << attacks::to_string(outcome.verdict) << " differs from expected "
              << attacks::to_string(expected) << "\n";
    return kExitMismatch;
  }
  return 0;
}

int cmd_bench(const Flags& f, const std::string& format, bool with_breakdown) {
  Settings s = resolve(f, true);
  bench::Format fmt = bench::format_from_string(format);
  std::vector<bench::BenchStats> stats;
  std::vector<std::pair<Mode, bench::Breakdown>> breakdowns;
  for (Mode mode : s.bench_modes) {
    TestbedConfig t = s.testbed;
    t.mode = mode;
    std::vector<bench::BenchStats> series;
    for (std::size_t pairs : s.bench_pairs) {
      auto m = bench::measure(t, pairs, s.bench_cycles);
      series.push_back(m.stats);
      if (with_breakdown && pairs == s.bench_pairs.front()) {
        breakdowns.emplace_back(mode, bench::breakdown(m.reports));
      }
    }
    if (series.size() >= 3) {
      auto fit = bench::fit_scaling(series);
      std::cerr << "fit " << runtime::to_string(mode) << ": slope " << fit.slope
                << " ms/pair, intercept " << fit.intercept << " ms, r^2 " << fit.r_squared
                << "\n";
    }
    stats.insert(stats.end(), series.begin(), series.end());
  }
  std::string text = bench::render(stats, fmt);
  if (with_breakdown) {
    std::cerr << bench::render_breakdown(breakdowns);
  }
  if (f.out.empty()) {
    std::cout << text;
  } else {
    bench::write_text_file(f.out, text);
  }
  return 0;
}

int cmd_matrix(const Flags& f, const std::string& modes, const std::string& vectors,
               const std::string& format) {
  Flags g = f;
  if (!modes.empty()) g.mode = modes;
  Settings s = resolve(g, true);
  if (!vectors.empty()) {
    s.matrix_vectors.clear();
    for (const auto& v : split(vectors)) {
      s.matrix_vectors.push_back(attacks::vector_from_string(v));
    }
  }
  if (format != "text" && format != "json") {
    throw CliError(CliErrc::kConfigError, "matrix format is text or json");
  }
  auto matrix = attacks::run_matrix(s.matrix_modes, s.matrix_vectors, s.testbed.seed);
  std::string text = format == "json" ? attacks::to_json(matrix).dump(2) + "\n"
                                      : attacks::render_table(matrix);
  emit(f, text);
  attacks::check_matrix(matrix);
  return 0;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"TrustZone-style PLC simulator: scan cycles, attacks and latency benches"};
  app.require_subcommand(1);

  Flags flags;
  auto* keygen = app.add_subcommand("keygen", "derive authority and device keys from --seed");
  add_common(keygen, flags);

  BuildFlags build;
  auto* build_ta = app.add_subcommand("build-ta", "compile ST and emit a signed TA manifest");
  add_common(build_ta, flags);
  build_ta->add_option("--source", build.source, "ST source (default: the scenario's program)");
  build_ta->add_option("--key", build.key, "authority signing key (hex seed file)");
  build_ta->add_option("--device-pub", build.device_pub, "device public key (hex file)");
  build_ta->add_option("--version", build.version, "TA version");

  auto* plant_cmd = app.add_subcommand("plant", "serve the scenario's slaves for --cycles steps");
  add_common(plant_cmd, flags);

  std::string deploy;
  std::string state_dir;
  auto* run = app.add_subcommand("run", "run the PLC; CycleReport JSON lines on stdout or --out");
  add_common(run, flags);
  run->add_option("--deploy", deploy, "plc.ta manifest (or plc.st in baseline) to install");
  run->add_option("--state-dir", state_dir, "persistent ledger and secure storage directory");

  AttackFlags attack;
  auto* attack_cmd = app.add_subcommand("attack", "evaluate one attack vector");
  add_common(attack_cmd, flags);
  attack_cmd->add_option("--vector", attack.vector, "a-f, a vector name, or kill_supplicant");
  attack_cmd->add_option("--target", attack.target, "link name (a) or address (d)");
  attack_cmd->add_option("--value", attack.value, "forced value (d)");
  attack_cmd->add_option("--mutation", attack.mutation, "identity, bit_flip or forge (a)");
  attack_cmd->add_option("--from-cycle", attack.from_cycle, "first attacked cycle");
  attack_cmd->add_option("--to-cycle", attack.to_cycle, "last attacked cycle");
  attack_cmd->add_option("--kill-after", attack.kill_after, "kill_supplicant: cycle");
  attack_cmd->add_flag("--restore", attack.restore, "kill_supplicant: restart before next cycle");

  std::string bench_format = "csv";
  bool with_breakdown = false;
  auto* bench_cmd = app.add_subcommand("bench", "measure scan-cycle latency per pair count");
  add_common(bench_cmd, flags);
  bench_cmd->add_option("--format", bench_format, "csv, json, text or svg");
  bench_cmd->add_flag("--breakdown", with_breakdown, "per-phase means on stderr");

  std::string matrix_modes;
  std::string matrix_vectors;
  std::string matrix_format = "text";
  auto* matrix = app.add_subcommand("matrix", "evaluate the security matrix");
  add_common(matrix, flags);
  matrix->add_option("--modes", matrix_modes, "comma list of modes");
  matrix->add_option("--vectors", matrix_vectors, "comma list of vectors");
  matrix->add_option("--format", matrix_format, "text or json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*keygen) return cmd_keygen(flags);
    if (*build_ta) return cmd_build_ta(flags, build);
    if (*plant_cmd) return cmd_plant(flags);
    if (*run) return cmd_run(flags, deploy, state_dir);
    if (*attack_cmd) return cmd_attack(flags, attack);
    if (*bench_cmd) return cmd_bench(flags, bench_format, with_breakdown);
    if (*matrix) return cmd_matrix(flags, matrix_modes, matrix_vectors, matrix_format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.name());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitUsage;
}

}  // namespace
}  // namespace tzplc::cli

int main(int argc, char** argv) { return tzplc::cli::main_impl(argc, argv); }
