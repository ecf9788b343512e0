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

#include "tzplc/attacks/attacks.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <memory>
#include <random>

#include <sodium.h>

#include "tzplc/logic/eval.h"
#include "tzplc/runtime/snapshot.h"
#include "tzplc/runtime/ta.h"
#include "tzplc/securechan/channel.h"
#include "tzplc/worldsim/manifest.h"

namespace tzplc::attacks {

using runtime::Mode;
using testbed::Testbed;
using testbed::TestbedConfig;

std::string_view module_name(AttackErrc) { return "attacks"; }

std::string_view to_string(AttackErrc code) {
  switch (code) {
    case AttackErrc::kConfigError: return "ConfigError";
    case AttackErrc::kAddressUnknown: return "AddressUnknown";
    case AttackErrc::kMatrixMismatch: return "MatrixMismatch";
  }
  return "AttackError";
}

std::string_view to_string(Vector v) {
  switch (v) {
    case Vector::kFalseDataInjection: return "false_data_injection";
    case Vector::kLogicInjection: return "logic_injection";
    case Vector::kLogicTheft: return "logic_theft";
    case Vector::kIoMemoryManipulation: return "io_memory_manipulation";
    case Vector::kDataTheft: return "data_theft";
    case Vector::kFirmwareModification: return "firmware_modification";
  }
  return "?";
}

char letter(Vector v) { return static_cast<char>('a' + static_cast<int>(v)); }

std::string_view title(Vector v) {
  switch (v) {
    case Vector::kFalseDataInjection: return "(a) False Data Injection";
    case Vector::kLogicInjection: return "(b) Control Logic Injection";
    case Vector::kLogicTheft: return "(c) Theft of Control Logic";
    case Vector::kIoMemoryManipulation: return "(d) I/O Memory Manipulation";
    case Vector::kDataTheft: return "(e) Data Theft and Misuse";
    case Vector::kFirmwareModification: return "(f) Firmware Modification";
  }
  return "?";
}

Vector vector_from_string(std::string_view name) {
  for (Vector v : kAllVectors) {
    if (name == to_string(v) || (name.size() == 1 && name[0] == letter(v))) return v;
  }
  throw AttackError(AttackErrc::kConfigError, "unknown attack vector '" + std::string(name) + "'");
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kBlocked: return "blocked";
    case Verdict::kSucceeded: return "succeeded";
    case Verdict::kNotApplicable: return "not_applicable";
    case Verdict::kOutOfScope: return "out_of_scope";
  }
  return "?";
}

Verdict verdict_from_string(std::string_view name) {
  for (Verdict v : {Verdict::kBlocked, Verdict::kSucceeded, Verdict::kNotApplicable,
                    Verdict::kOutOfScope}) {
    if (name == to_string(v)) return v;
  }
  throw AttackError(AttackErrc::kConfigError, "unknown verdict '" + std::string(name) + "'");
}

Verdict expected_verdict(Vector v, Mode mode) {
  if (v == Vector::kFirmwareModification) return Verdict::kOutOfScope;
  if (mode == Mode::kBaseline) {
    return v == Vector::kDataTheft ? Verdict::kNotApplicable : Verdict::kSucceeded;
  }
  if (mode == Mode::kEnhanced) return Verdict::kBlocked;
  switch (v) {
    case Vector::kFalseDataInjection:
    case Vector::kIoMemoryManipulation: return Verdict::kSucceeded;
    case Vector::kDataTheft: return Verdict::kNotApplicable;
    default: return Verdict::kBlocked;
  }
}

std::string_view to_string(Mutation m) {
  switch (m) {
    case Mutation::kIdentity: return "identity";
    case Mutation::kBitFlip: return "bit_flip";
    case Mutation::kForge: return "forge";
  }
  return "?";
}

Mutation mutation_from_string(std::string_view name) {
  for (Mutation m : {Mutation::kIdentity, Mutation::kBitFlip, Mutation::kForge}) {
    if (name == to_string(m)) return m;
  }
  throw AttackError(AttackErrc::kConfigError, "unknown mutation '" + std::string(name) + "'");
}

std::string AttackOutcome::evidence_hash() const {
  nlohmann::json j = {{"attack", attack},
                      {"mode", runtime::to_string(mode)},
                      {"verdict", to_string(verdict)}};
  for (const auto& e : evidence) j["evidence"].push_back({e.kind, e.detail});
  std::string text = j.dump();
  Bytes digest(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(digest.data(), reinterpret_cast<const unsigned char*>(text.data()),
                     text.size());
  return to_hex(digest);
}

bool AttackOutcome::has(std::string_view kind) const {
  return std::any_of(evidence.begin(), evidence.end(),
                     [kind](const Evidence& e) { return e.kind == kind; });
}

TestbedConfig default_attack_testbed(Mode mode, std::uint64_t seed) {
  TestbedConfig c;
  c.mode = mode;
  c.scenario = testbed::ScenarioKind::kLoopback;
  c.pairs = 1;
  c.loopback_period = 0;
  c.cycles = 30;
  c.seed = seed;
  c.slave_timeout = std::chrono::milliseconds(100);
  return c;
}

AttackScenario make_attack(Vector v, Mode mode, std::uint64_t seed) {
  AttackScenario s;
  s.vector = v;
  s.testbed = default_attack_testbed(mode, seed);
  if (v == Vector::kIoMemoryManipulation) s.params.target = "%IX0.0";
  s.expected = expected_verdict(v, mode);
  return s;
}

AttackScenario attack_from_json(const nlohmann::json& j) {
  try {
    AttackScenario s;
    s.vector = vector_from_string(j.at("vector").get<std::string>());
    Mode mode = runtime::mode_from_string(j.value("mode", std::string("enhanced")));
    s.testbed = default_attack_testbed(mode, j.value("seed", std::uint64_t{1}));
    if (j.contains("scenario")) {
      s.testbed.scenario = testbed::scenario_from_string(j["scenario"].get<std::string>());
    }
    s.testbed.pairs = j.value("pairs", s.testbed.pairs);
    s.testbed.loopback_period = j.value("loopback_period", s.testbed.loopback_period);
    s.testbed.cycles = j.value("cycles", s.testbed.cycles);
    if (s.vector == Vector::kIoMemoryManipulation) s.params.target = "%IX0.0";
    s.params.target = j.value("target", s.params.target);
    if (j.contains("value")) s.params.value = j["value"].get<std::int32_t>();
    if (j.contains("mutation")) {
      s.params.mutation = mutation_from_string(j["mutation"].get<std::string>());
    }
    s.params.from_cycle = j.value("from_cycle", s.params.from_cycle);
    s.params.to_cycle = j.value("to_cycle", s.params.to_cycle);
    s.expected = j.contains("expected")
                     ? verdict_from_string(j["expected"].get<std::string>())
                     : expected_verdict(s.vector, mode);
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw AttackError(AttackErrc::kConfigError, e.what());
  }
}

nlohmann::json to_json(const AttackScenario& s) {
  nlohmann::json j = {{"vector", to_string(s.vector)},
                      {"mode", runtime::to_string(s.mode())},
                      {"scenario", testbed::to_string(s.testbed.scenario)},
                      {"pairs", s.testbed.pairs},
                      {"loopback_period", s.testbed.loopback_period},
                      {"cycles", s.testbed.cycles},
                      {"seed", s.testbed.seed},
                      {"mutation", to_string(s.params.mutation)},
                      {"from_cycle", s.params.from_cycle},
                      {"expected", to_string(s.expected)}};
  if (!s.params.target.empty()) j["target"] = s.params.target;
  if (s.params.value) j["value"] = *s.params.value;
  if (s.params.to_cycle != UINT64_MAX) j["to_cycle"] = s.params.to_cycle;
  return j;
}

namespace {

using Writes = std::vector<plant::ActuatorWrite>;

struct Run {
  testbed::RunResult result;
  Writes writes;
};

Run run_plain(const TestbedConfig& config) {
  Testbed tb(config);
  Run r;
  r.result = tb.run();
  r.writes = tb.scenario().write_log().writes();
  return r;
}

Run finish(Testbed& tb) {
  Run r;
  r.result = tb.run();
  r.writes = tb.scenario().write_log().writes();
  return r;
}

std::optional<Evidence> divergence(const Writes& golden, const Writes& got) {
  std::size_t n = std::min(golden.size(), got.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (golden[i] == got[i]) continue;
    return Evidence{"divergence",
                    "actuator write #" + std::to_string(i) + " to slave " +
                        std::to_string(got[i].slave) + ": expected " + to_hex(golden[i].data) +
                        ", got " + to_hex(got[i].data)};
  }
  if (golden.size() != got.size()) {
    return Evidence{"divergence", "actuator write count " + std::to_string(got.size()) +
                                      " instead of " + std::to_string(golden.size())};
  }
  return std::nullopt;
}

// Divergence wins; otherwise an applied attack that changed nothing was
// blocked; otherwise nothing was attempted.
Verdict decide(bool diverged, bool applied) {
  if (diverged) return Verdict::kSucceeded;
  return applied ? Verdict::kBlocked : Verdict::kNotApplicable;
}

AttackOutcome outcome_for(const AttackScenario& s) {
  AttackOutcome o;
  o.attack = std::string(to_string(s.vector));
  o.mode = s.mode();
  return o;
}

void add_run_error(AttackOutcome& o, const testbed::RunResult& r) {
  if (r.error_name) {
    o.evidence.push_back({"availability", "run aborted with " + *r.error_name + " after " +
                                              std::to_string(r.reports.size()) + " cycles"});
  }
}

bool in_window(const AttackParams& p, std::uint64_t cycle) {
  return cycle >= p.from_cycle && cycle <= p.to_cycle;
}

net::Framing framing_for(const runtime::SlaveBinding& b, Mode mode) {
  return runtime::is_secure(b, mode) ? net::Framing::kLengthPrefixed : net::Framing::kModbusTcp;
}

void mutate(Mutation m, net::Framing framing, Bytes& frame) {
  switch (m) {
    case Mutation::kIdentity: return;
    case Mutation::kBitFlip:
      if (!frame.empty()) frame.back() ^= 0x01;
      return;
    case Mutation::kForge: {
      // Modbus: MBAP(7) | function | byte count | data. A secure record has
      // no structure the attacker can use, so its body is replaced outright.
      std::size_t from = framing == net::Framing::kModbusTcp ? 9 : 4;
      for (std::size_t i = from; i < frame.size(); ++i) frame[i] = ~frame[i];
      return;
    }
  }
}

// Persistent state directory for runs that must share a ledger.
class ScratchDir {
 public:
  explicit ScratchDir(std::uint64_t seed) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("tzplc-attack-" + std::to_string(seed) + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string address_slot(const logic::LocatedAddress& a) { return a.to_string(); }

std::int32_t get_input(const logic::ProcessImage& image, const logic::LocatedAddress& a) {
  if (a.width == logic::IoWidth::kBit) return image.input_bits[a.index] ? 1 : 0;
  return image.input_words[a.index];
}

void set_input(logic::ProcessImage& image, const logic::LocatedAddress& a, std::int32_t v) {
  if (a.width == logic::IoWidth::kBit) {
    image.input_bits[a.index] = v != 0;
  } else {
    image.input_words[a.index] = static_cast<std::uint16_t>(v);
  }
}

std::int32_t complement(const logic::LocatedAddress& a, std::int32_t v) {
  return a.width == logic::IoWidth::kBit ? (v != 0 ? 0 : 1) : (~v & 0xFFFF);
}

// A program an attacker would substitute: every output bit toggles each
// cycle and every output word is pinned.
std::string rogue_program(const logic::ImageShape& shape) {
  std::string decls;
  std::string body;
  for (std::uint32_t i = 0; i < shape.output_bits; ++i) {
    std::string n = "R" + std::to_string(i);
    decls += "    " + n + " AT %QX" + std::to_string(i / 8) + "." + std::to_string(i % 8) +
             " : BOOL;\n";
    body += "  " + n + " := NOT " + n + ";\n";
  }
  for (std::uint32_t i = 0; i < shape.output_words; ++i) {
    std::string n = "W" + std::to_string(i);
    decls += "    " + n + " AT %QW" + std::to_string(i) + " : INT;\n";
    body += "  " + n + " := 12345;\n";
  }
  return "PROGRAM rogue\n  VAR\n" + decls + "  END_VAR\n" + body + "END_PROGRAM\n";
}

struct ViewItem {
  std::string where;
  Bytes data;
};

std::optional<std::size_t> find_bytes(const Bytes& hay, ByteSpan needle) {
  if (needle.empty() || hay.size() < needle.size()) return std::nullopt;
  auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end());
  if (it == hay.end()) return std::nullopt;
  return static_cast<std::size_t>(it - hay.begin());
}

}  // namespace

AttackOutcome mitm_tamper(const AttackScenario& s) {
  AttackOutcome o = outcome_for(s);
  Run golden = run_plain(s.testbed);

  auto armed = std::make_shared<std::atomic<bool>>(false);
  runtime::RuntimeHooks hooks;
  AttackParams params = s.params;
  hooks.cycle_start = [armed, params](std::uint64_t n) { *armed = in_window(params, n); };
  Testbed tb(s.testbed, hooks);

  std::size_t links = 0;
  for (const auto& b : tb.bindings()) {
    if (b.role != runtime::BindingRole::kSensor) continue;
    if (!s.params.target.empty() && b.name != s.params.target) continue;
    net::Framing framing = framing_for(b, s.mode());
    Mutation m = s.params.mutation;
    tb.network().interpose(b.endpoint, b.name, framing,
                           [armed, m, framing](const std::string&, net::Direction d,
                                               std::uint64_t, Bytes& frame) {
                             if (d == net::Direction::kToClient && *armed) {
                               mutate(m, framing, frame);
                             }
                           });
    ++links;
  }
  if (links == 0) {
    throw AttackError(AttackErrc::kConfigError, "no sensor link named '" + s.params.target + "'");
  }

  Run attacked = finish(tb);
  std::size_t mutated = tb.network().capture()->mutated_count();
  if (mutated > 0) {
    o.evidence.push_back({"tamper", std::to_string(mutated) + " sensor frames altered on " +
                                        std::to_string(links) + " link(s)"});
  }
  if (attacked.result.summary.stale_cycles > 0) {
    o.evidence.push_back(
        {"stale", std::to_string(attacked.result.summary.stale_cycles) +
                      " cycles ran on last-known inputs after dropped replies"});
  }
  add_run_error(o, attacked.result);
  auto diff = divergence(golden.writes, attacked.writes);
  if (diff) o.evidence.push_back(*diff);
  o.verdict = decide(diff.has_value(), mutated > 0);
  return o;
}

AttackOutcome tamper_io_memory(const AttackScenario& s) {
  AttackOutcome o = outcome_for(s);
  auto addr = logic::parse_address(s.params.target);
  if (!addr) {
    throw AttackError(AttackErrc::kAddressUnknown, "not an address: '" + s.params.target + "'");
  }
  if (addr->direction != logic::IoDirection::kInput) {
    throw AttackError(AttackErrc::kConfigError,
                      "I/O memory tampering targets input addresses, got " + addr->to_string());
  }

  struct State {
    std::uint64_t tampered = 0;
    std::uint64_t first = 0;
    std::string where;
  };
  auto state = std::make_shared<State>();
  AttackParams params = s.params;
  logic::LocatedAddress a = *addr;
  runtime::RuntimeHooks hooks;
  hooks.before_logic = [state, params, a](runtime::NormalWorldBuffers& b) {
    if (!in_window(params, b.cycle)) return;
    if (b.inputs != nullptr) {
      std::int32_t current = get_input(*b.inputs, a);
      std::int32_t v = params.value.value_or(complement(a, current));
      if (v == current) return;
      set_input(*b.inputs, a, v);
      state->where = "input image";
    } else if (b.shm != nullptr) {
      // All that is left to the normal world: the published snapshot.
      auto snap = runtime::decode_snapshot(b.shm->normal_read());
      if (!snap) return;
      std::int32_t current = get_input(snap->image, a);
      std::int32_t v = params.value.value_or(complement(a, current));
      if (v == current) return;
      set_input(snap->image, a, v);
      b.shm->normal_write(0, runtime::encode_snapshot(*snap));
      state->where = "shared-memory snapshot";
    } else {
      return;
    }
    if (state->tampered++ == 0) state->first = b.cycle;
  };

  Testbed tb(s.testbed, hooks);
  logic::ImageShape shape = runtime::shape_from_bindings(tb.bindings());
  std::uint32_t limit = a.width == logic::IoWidth::kBit ? shape.input_bits : shape.input_words;
  if (a.index >= limit) {
    throw AttackError(AttackErrc::kAddressUnknown,
                      a.to_string() + " is outside the installation's I/O image");
  }
  if (!logic::compile(tb.program(), shape).reads(a)) {
    o.evidence.push_back({"note", "the program never reads " + address_slot(a)});
    o.verdict = Verdict::kNotApplicable;
    return o;
  }

  Run golden = run_plain(s.testbed);
  Run attacked = finish(tb);
  if (state->tampered > 0) {
    o.evidence.push_back({"tamper", address_slot(a) + " overwritten in the " + state->where +
                                        " on " + std::to_string(state->tampered) +
                                        " cycles from cycle " + std::to_string(state->first)});
  }
  add_run_error(o, attacked.result);
  auto diff = divergence(golden.writes, attacked.writes);
  if (diff) o.evidence.push_back(*diff);
  o.verdict = decide(diff.has_value(), state->tampered > 0);
  return o;
}

AttackOutcome inject_logic(const AttackScenario& s) {
  AttackOutcome o = outcome_for(s);
  ScratchDir dir(s.testbed.seed);
  TestbedConfig config = s.testbed;
  config.state_dir = dir.path();

  if (s.mode() == Mode::kBaseline) {
    Run golden = run_plain(config);
    Testbed tb(config);
    std::string rogue = rogue_program(runtime::shape_from_bindings(tb.bindings()));
    testbed::write_file(tb.deployment_path(), to_bytes(rogue));
    o.evidence.push_back({"tamper", "plc.st replaced with a rogue program"});
    Run attacked = finish(tb);
    add_run_error(o, attacked.result);
    auto diff = divergence(golden.writes, attacked.writes);
    if (diff) o.evidence.push_back(*diff);
    o.verdict = decide(diff.has_value(), true);
    return o;
  }

  // The genuine TA at version 2 has been deployed before.
  config.ta_version = 2;
  Run golden = run_plain(config);

  using Variant = std::pair<std::string, std::function<Bytes(Testbed&)>>;
  Mode mode = s.mode();
  auto rogue_body = [mode](Testbed& tb) {
    runtime::TaPayload payload;
    payload.program = rogue_program(runtime::shape_from_bindings(tb.bindings()));
    payload.shape = runtime::shape_from_bindings(tb.bindings());
    payload.slave_timeout = tb.config().slave_timeout;
    if (mode == Mode::kEnhanced) {
      payload.bindings = tb.bindings();
      payload.identity_seed = Bytes(32, 0x42);
    }
    Bytes image = runtime::make_ta_image(mode, payload).serialize();
    return worldsim::seal_to_device(worldsim::device_public_key(tb.keys().device_secret),
                                    image);
  };
  std::vector<Variant> variants = {
      {"unsigned",
       [rogue_body](Testbed& tb) {
         worldsim::TaManifest m;
         m.uuid = tb.ta_uuid();
         m.version = 3;
         m.body = rogue_body(tb);
         return worldsim::encode_manifest(m);
       }},
      {"foreign-signed",
       [rogue_body](Testbed& tb) {
         Bytes attacker_seed(32, 0x66);
         return worldsim::encode_manifest(
             worldsim::sign_manifest(tb.ta_uuid(), 3, rogue_body(tb), attacker_seed));
       }},
      {"downgraded",
       [](Testbed& tb) { return tb.build_manifest(1, tb.program()); }},
  };

  std::optional<Evidence> diff;
  for (const auto& [name, make] : variants) {
    Testbed tb(config);
    testbed::write_file(tb.deployment_path(), make(tb));
    Run attacked = finish(tb);
    if (attacked.result.error_name) {
      o.evidence.push_back({"rejected", name + " manifest: " + *attacked.result.error_name});
      continue;
    }
    o.evidence.push_back({"note", name + " manifest loaded"});
    if (!diff) diff = divergence(golden.writes, attacked.writes);
  }
  if (diff) o.evidence.push_back(*diff);
  o.verdict = decide(diff.has_value(), true);
  return o;
}

AttackOutcome steal_logic_and_keys(const AttackScenario& s) {
  AttackOutcome o = outcome_for(s);
  bool theft = s.vector == Vector::kLogicTheft;

  runtime::RuntimeHooks hooks;
  auto inputs_seen = std::make_shared<std::vector<ViewItem>>();
  hooks.before_logic = [inputs_seen](runtime::NormalWorldBuffers& b) {
    if (b.inputs != nullptr) {
      inputs_seen->push_back({"input image", logic::encode_image(*b.inputs)});
    }
  };
  Testbed tb(s.testbed, hooks);

  std::vector<std::pair<std::string, Bytes>> needles;
  if (theft) {
    needles.emplace_back("program canary", to_bytes(tb.canary()));
  } else {
    bool credentials = std::any_of(tb.bindings().begin(), tb.bindings().end(),
                                   [&](const auto& b) { return runtime::is_secure(b, s.mode()); });
    if (!credentials) {
      o.evidence.push_back(
          {"note", "no credentials are provisioned in " + std::string(runtime::to_string(s.mode())) +
                       " mode"});
      o.verdict = Verdict::kNotApplicable;
      return o;
    }
    auto plc = securechan::identity_from_seed("plc", tb.keys().plc_seed);
    needles.emplace_back("PLC identity seed", tb.keys().plc_seed);
    needles.emplace_back("PLC private key", plc.private_key);
  }

  for (const auto& b : tb.bindings()) {
    tb.network().interpose(b.endpoint, b.name, framing_for(b, s.mode()), {});
  }
  Run run = finish(tb);
  add_run_error(o, run.result);

  std::vector<ViewItem> view;
  for (auto& [name, bytes] : tb.state_files()) view.push_back({"file " + name, std::move(bytes)});
  if (tb.world() != nullptr) {
    if (auto region = tb.world()->shm(runtime::kSnapshotRegion)) {
      view.push_back({"shared memory", region->normal_read()});
    }
  }
  if (tb.runtime() != nullptr) {
    if (auto snap = tb.runtime()->snapshot_source()()) {
      view.push_back({"snapshot", runtime::encode_snapshot(*snap)});
    }
  }
  for (const auto& f : tb.network().capture()->frames()) {
    view.push_back({"frame " + f.link + "#" + std::to_string(f.index), f.delivered});
  }
  for (auto& item : *inputs_seen) view.push_back(std::move(item));

  std::size_t total = 0;
  bool leaked = false;
  for (const auto& item : view) {
    total += item.data.size();
    for (const auto& [what, needle] : needles) {
      if (auto at = find_bytes(item.data, needle)) {
        o.evidence.push_back({"leak", what + " in " + item.where + " at offset " +
                                          std::to_string(*at)});
        leaked = true;
      }
    }
  }
  o.evidence.push_back({"scan", std::to_string(view.size()) + " normal-world objects, " +
                                    std::to_string(total) + " bytes"});
  o.verdict = decide(leaked, true);
  return o;
}

AttackOutcome firmware_modification(const AttackScenario& s) {
  AttackOutcome o = outcome_for(s);
  o.verdict = Verdict::kOutOfScope;
  o.evidence.push_back({"note", "secure boot chain not simulated"});
  if (s.mode() == Mode::kBaseline) return o;
  Testbed tb(s.testbed);
  Bytes manifest = testbed::read_file(tb.deployment_path());
  manifest[manifest.size() / 2] ^= 0x01;
  try {
    tb.world()->load_ta(manifest);
    o.evidence.push_back({"note", "modified TA image was accepted at load"});
  } catch (const Error& e) {
    o.evidence.push_back(
        {"rejected", "modified TA image refused at load: " + std::string(e.name())});
  }
  return o;
}

AttackOutcome run_attack(const AttackScenario& s) {
  switch (s.vector) {
    case Vector::kFalseDataInjection: return mitm_tamper(s);
    case Vector::kLogicInjection: return inject_logic(s);
    case Vector::kLogicTheft:
    case Vector::kDataTheft: return steal_logic_and_keys(s);
    case Vector::kIoMemoryManipulation: return tamper_io_memory(s);
    case Vector::kFirmwareModification: return firmware_modification(s);
  }
  throw AttackError(AttackErrc::kConfigError, "unknown vector");
}

AttackOutcome kill_supplicant(const TestbedConfig& config, const KillParams& params) {
  AttackOutcome o;
  o.attack = "kill_supplicant";
  o.mode = config.mode;
  if (config.mode == Mode::kBaseline) {
    o.evidence.push_back({"note", "no supplicant in the baseline"});
    o.verdict = Verdict::kNotApplicable;
    return o;
  }
  auto tb_ptr = std::make_shared<Testbed*>(nullptr);
  auto killed = std::make_shared<bool>(false);
  runtime::RuntimeHooks hooks;
  hooks.cycle_end = [tb_ptr, killed, params](std::uint64_t n) {
    if (n == params.kill_after) {
      (*tb_ptr)->world()->set_supplicant_alive(false);
      *killed = true;
    }
  };
  if (params.restore_before_next) {
    hooks.cycle_start = [tb_ptr, params](std::uint64_t n) {
      if (n == params.kill_after + 1) (*tb_ptr)->world()->set_supplicant_alive(true);
    };
  }
  Testbed tb(config, hooks);
  *tb_ptr = &tb;
  auto r = tb.run();
  if (*killed) {
    o.evidence.push_back(
        {"tamper", "supplicant killed after cycle " + std::to_string(params.kill_after)});
  }
  bool lost = r.error_name.has_value();
  if (lost) {
    o.evidence.push_back({"availability", "scan loop stopped with " + *r.error_name + " after " +
                                              std::to_string(r.reports.size()) + " of " +
                                              std::to_string(config.cycles) + " cycles"});
  }
  o.verdict = decide(lost, *killed);
  return o;
}

}  // namespace tzplc::attacks
