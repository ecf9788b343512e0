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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Every expected value below is pinned
// here, independent of the library's own tables.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <future>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "support/st_oracle.h"
#include "tzplc/attacks/attacks.h"
#include "tzplc/bench/bench.h"
#include "tzplc/common/rng.h"
#include "tzplc/logic/eval.h"
#include "tzplc/modbus/codec.h"
#include "tzplc/net/pipe.h"
#include "tzplc/securechan/channel.h"
#include "tzplc/testbed/testbed.h"

namespace tzplc::acceptance {
namespace {

using namespace std::chrono_literals;
using attacks::Vector;
using attacks::Verdict;
using runtime::Mode;
using testbed::ScenarioKind;
using testbed::Testbed;
using testbed::TestbedConfig;

constexpr Mode kModes[] = {Mode::kBaseline, Mode::kMinimal, Mode::kEnhanced};
constexpr std::size_t kPairs[] = {1, 2, 4, 8};
constexpr double kReferenceAvg[] = {9.5, 17.3, 32.7, 63.6};
constexpr Duration kWorldSwitch = 280us;
constexpr std::int32_t kSyncThreshold = 10;

// Collects failures for one criterion; the first few are printed.
class Check {
 public:
  void fail(const std::string& why) {
    if (failures_.size() < 5) failures_.push_back(why);
    ++count_;
  }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s;
    for (const auto& f : failures_) s += "\n    " + f;
    if (count_ > failures_.size()) {
      s += "\n    (" + std::to_string(count_ - failures_.size()) + " more)";
    }
    return s;
  }
  std::string note;

 private:
  std::vector<std::string> failures_;
  std::size_t count_ = 0;
};

struct Criterion {
  int number;
  std::string name;
  std::function<void(Check&)> body;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// r^2 of a least-squares line, as the squared sample correlation.
double correlation_squared(const std::vector<std::pair<double, double>>& pts) {
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  double r = (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return r * r;
}

TestbedConfig bench_base(Mode mode) {
  TestbedConfig c;
  c.mode = mode;
  c.seed = 7;
  c.loopback_period = 3;
  c.clock = ClockMode::kVirtual;
  return c;
}

// Enhanced and other-mode measurements shared by criteria 2 and 3.
std::map<std::pair<Mode, std::size_t>, bench::Measurement>& measurements() {
  static std::map<std::pair<Mode, std::size_t>, bench::Measurement> m;
  return m;
}

const bench::Measurement& measured(Mode mode, std::size_t pairs) {
  auto& m = measurements();
  auto it = m.find({mode, pairs});
  if (it == m.end()) {
    it = m.emplace(std::make_pair(mode, pairs), bench::measure(bench_base(mode), pairs, 1000))
             .first;
  }
  return it->second;
}

// ---------------------------------------------------------------------------
// 1

void security_matrix(Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<Vector> vectors(std::begin(attacks::kAllVectors), std::end(attacks::kAllVectors));
  attacks::Matrix m = attacks::run_matrix({Mode::kMinimal, Mode::kEnhanced}, vectors, 1);
  double elapsed = seconds_since(t0);

  const std::map<Vector, std::pair<Verdict, Verdict>> want = {
      {Vector::kFalseDataInjection, {Verdict::kSucceeded, Verdict::kBlocked}},
      {Vector::kLogicInjection, {Verdict::kBlocked, Verdict::kBlocked}},
      {Vector::kLogicTheft, {Verdict::kBlocked, Verdict::kBlocked}},
      {Vector::kIoMemoryManipulation, {Verdict::kSucceeded, Verdict::kBlocked}},
      {Vector::kDataTheft, {Verdict::kNotApplicable, Verdict::kBlocked}},
      {Vector::kFirmwareModification, {Verdict::kOutOfScope, Verdict::kOutOfScope}},
  };
  for (const auto& [v, verdicts] : want) {
    for (auto [mode, verdict] : {std::pair{Mode::kMinimal, verdicts.first},
                                 std::pair{Mode::kEnhanced, verdicts.second}}) {
      const attacks::MatrixCell* cell = m.cell(v, mode);
      if (cell == nullptr) {
        c.fail(std::string(1, attacks::letter(v)) + " missing");
        continue;
      }
      c.expect(cell->outcome.verdict == verdict,
               std::string("(") + attacks::letter(v) + ") " +
                   std::string(runtime::to_string(mode)) + ": expected " +
                   std::string(attacks::to_string(verdict)) + ", got " +
                   std::string(attacks::to_string(cell->outcome.verdict)));
    }
  }
  c.expect(elapsed < 120.0, "took " + fmt(elapsed, 1) + " s");
  c.note = "12 cells, " + fmt(elapsed, 1) + " s";
}

// ---------------------------------------------------------------------------
// 2

void linear_scaling(Check& c) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<bench::BenchStats> stats;
  for (std::size_t p : kPairs) stats.push_back(measured(Mode::kEnhanced, p).stats);
  double elapsed = seconds_since(t0);

  for (const auto& s : stats) c.expect(s.cycles == 1000, "cycles " + std::to_string(s.cycles));
  bench::Fit fit = bench::fit_scaling(stats);
  c.expect(fit.r_squared >= 0.99, "bench r^2 " + fmt(fit.r_squared, 6));
  c.expect(fit.slope > 0, "bench slope " + fmt(fit.slope));

  std::vector<bench::BenchStats> reference;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < 4; ++i) {
    bench::BenchStats s;
    s.mode = Mode::kEnhanced;
    s.pairs = kPairs[i];
    s.avg_ms = kReferenceAvg[i];
    reference.push_back(s);
    pts.emplace_back(static_cast<double>(kPairs[i]), kReferenceAvg[i]);
  }
  bench::Fit pub = bench::fit_scaling(reference);
  c.expect(pub.r_squared >= 0.99, "reference r^2 " + fmt(pub.r_squared, 6));
  c.expect(std::abs(pub.r_squared - correlation_squared(pts)) < 1e-9,
           "fit_scaling disagrees with the correlation oracle");
  c.expect(elapsed < 60.0, "took " + fmt(elapsed, 1) + " s");
  c.note = "slope " + fmt(fit.slope, 3) + " ms/pair, r^2 " + fmt(fit.r_squared, 6) +
           "; reference r^2 " + fmt(pub.r_squared, 6) + "; " + fmt(elapsed, 1) + " s";
}

// ---------------------------------------------------------------------------
// 3

void ordering_and_accounting(Check& c) {
  std::size_t reports = 0;
  for (std::size_t p : kPairs) {
    double avg[3];
    for (int i = 0; i < 3; ++i) {
      const auto& m = measured(kModes[i], p);
      avg[i] = m.stats.avg_ms;
      Duration world{0};
      for (const auto& r : m.reports) {
        ++reports;
        c.expect(r.total == r.phase_sum(), "total != sum of phases, cycle " +
                                               std::to_string(r.cycle_number));
        world += r.phase(Phase::kWorldSwitch);
      }
      Duration want = kModes[i] == Mode::kBaseline
                          ? Duration{0}
                          : kWorldSwitch * static_cast<std::int64_t>(m.reports.size());
      c.expect(world == want, std::string(runtime::to_string(kModes[i])) + " world_switch sum " +
                                  std::to_string(world.count()) + " ns over " +
                                  std::to_string(m.reports.size()) + " cycles");
    }
    c.expect(avg[0] <= avg[1] && avg[1] <= avg[2],
             std::to_string(p) + " pairs: " + fmt(avg[0]) + " / " + fmt(avg[1]) + " / " +
                 fmt(avg[2]));
  }
  c.note = std::to_string(reports) + " cycle reports";
}

// ---------------------------------------------------------------------------
// 4

void functional_equivalence(Check& c) {
  std::size_t bytes = 0;
  for (ScenarioKind kind : {ScenarioKind::kTank, ScenarioKind::kGenerator}) {
    std::vector<Bytes> streams;
    for (Mode mode : kModes) {
      TestbedConfig config;
      config.mode = mode;
      config.scenario = kind;
      config.seed = 20261016;
      config.cycles = 1000;
      Testbed tb(config);
      auto result = tb.run();
      c.expect(!result.error, std::string(testbed::to_string(kind)) + "/" +
                                  std::string(runtime::to_string(mode)) + ": " +
                                  result.error.value_or(""));
      streams.push_back(result.write_log);
    }
    c.expect(!streams[0].empty(), std::string(testbed::to_string(kind)) + ": no writes");
    c.expect(streams[0] == streams[1], std::string(testbed::to_string(kind)) +
                                           ": baseline and minimal differ");
    c.expect(streams[0] == streams[2], std::string(testbed::to_string(kind)) +
                                           ": baseline and enhanced differ");
    bytes += streams[0].size();
  }
  c.note = std::to_string(bytes) + " bytes compared per mode";
}

// ---------------------------------------------------------------------------
// 5

std::string trace_string(const std::vector<worldsim::InvokeRecord>& trace) {
  std::string s;
  for (const auto& r : trace) {
    switch (r.entry) {
      case worldsim::entry::kInit: s += "I"; break;
      case worldsim::entry::kExec: s += "E"; break;
      case worldsim::entry::kExit: s += "X"; break;
      case worldsim::entry::kControlLogic: s += "L"; break;
      default: s += "?"; break;
    }
  }
  return s;
}

void entry_protocol(Check& c) {
  const std::regex enhanced("^IE*X$");
  const std::regex minimal("^L*$");
  int runs = 0;
  for (ScenarioKind kind : {ScenarioKind::kTank, ScenarioKind::kGenerator, ScenarioKind::kLoopback}) {
    for (std::uint64_t cycles : {0, 1, 25}) {
      for (Mode mode : {Mode::kMinimal, Mode::kEnhanced}) {
        TestbedConfig config;
        config.mode = mode;
        config.scenario = kind;
        config.cycles = cycles;
        config.seed = 3 + cycles;
        Testbed tb(config);
        auto result = tb.run();
        std::string t = trace_string(result.trace);
        std::string label = std::string(testbed::to_string(kind)) + "/" +
                            std::string(runtime::to_string(mode)) + "/" +
                            std::to_string(cycles) + ": " + t;
        c.expect(!result.error, label + " " + result.error.value_or(""));
        if (mode == Mode::kEnhanced) {
          c.expect(std::regex_match(t, enhanced), label);
          c.expect(t.size() == cycles + 2, label);
        } else {
          c.expect(std::regex_match(t, minimal), label);
          c.expect(t.size() == cycles, label);
        }
        ++runs;
      }
    }
  }
  c.note = std::to_string(runs) + " runs";
}

// ---------------------------------------------------------------------------
// 6

struct SessionPair {
  securechan::SecureSession a;
  securechan::SecureSession b;
};

SessionPair connected(std::uint64_t seed) {
  using namespace securechan;
  Rng rng(seed);
  PeerIdentity plc = generate_identity("plc", rng);
  PeerIdentity slave = generate_identity("slave", rng);
  TrustSet plc_trusts({slave.public_only()});
  TrustSet slave_trusts({plc.public_only()});
  auto [x, y] = net::make_pipe();
  auto responder = std::async(std::launch::async, [&, y = y.get()] {
    return handshake(*y, slave, slave_trusts, Role::kResponder, 2s);
  });
  SecureSession a = handshake(*x, plc, plc_trusts, Role::kInitiator, 2s);
  return {std::move(a), responder.get()};
}

template <typename F>
std::optional<securechan::ChanErrc> chan_error(F&& f) {
  try {
    f();
  } catch (const securechan::ChanError& e) {
    return e.code();
  }
  return std::nullopt;
}

Bytes random_bytes(Rng& rng, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

void channel_properties(Check& c) {
  using securechan::ChanErrc;
  Rng rng(66);
  SessionPair s = connected(1);

  // Every single-bit mutation of one sealed 64-byte record.
  Bytes payload = random_bytes(rng, 64);
  Bytes record = s.a.seal(payload);
  std::size_t flips = 0;
  for (std::size_t i = 0; i < record.size(); ++i) {
    for (int bit = 0; bit < 8; ++bit) {
      Bytes mutated = record;
      mutated[i] ^= static_cast<std::uint8_t>(1u << bit);
      auto err = chan_error([&] { s.b.open(mutated); });
      c.expect(err == ChanErrc::kAuthFailed,
               "flip byte " + std::to_string(i) + " bit " + std::to_string(bit) + ": " +
                   (err ? std::string(securechan::to_string(*err)) : "accepted"));
      ++flips;
    }
  }
  c.expect(s.b.open(record) == payload, "untouched record no longer opens");

  // Replays of valid records.
  std::vector<Bytes> seen;
  for (int i = 0; i < 100; ++i) {
    Bytes r = s.a.seal(random_bytes(rng, rng() % 200));
    s.b.open(r);
    seen.push_back(r);
  }
  std::size_t rejected = 0;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    const Bytes& r = seen[(i * 37) % seen.size()];
    auto err = chan_error([&] { s.b.open(r); });
    if (err) ++rejected;
    c.expect(err == ChanErrc::kReplay, "replay accepted or misclassified");
  }

  // Honest round trips both ways.
  std::size_t identical = 0;
  for (int i = 0; i < 1000; ++i) {
    Bytes p = random_bytes(rng, rng() % 1025);
    bool forward = i % 2 == 0;
    Bytes back = forward ? s.b.open(s.a.seal(p)) : s.a.open(s.b.seal(p));
    if (back == p) ++identical;
  }
  c.expect(identical == 1000, std::to_string(identical) + "/1000 round trips intact");
  c.note = std::to_string(flips) + " flips, " + std::to_string(rejected) + "/100 replays rejected, " +
           std::to_string(identical) + "/1000 round trips";
}

// ---------------------------------------------------------------------------
// 7

// Reference MBAP encoder.
Bytes reference_frame(std::uint16_t txn, std::uint8_t unit, const modbus::Pdu& pdu) {
  std::size_t len = 2 + pdu.data.size();
  Bytes out = {static_cast<std::uint8_t>(txn >> 8), static_cast<std::uint8_t>(txn), 0, 0,
               static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len), unit,
               pdu.function};
  out.insert(out.end(), pdu.data.begin(), pdu.data.end());
  return out;
}

modbus::Pdu random_request(Rng& rng) {
  using namespace modbus;
  auto u16 = [&] { return static_cast<std::uint16_t>(rng()); };
  auto bits = [&](std::size_t n) {
    std::vector<bool> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng() & 1;
    return v;
  };
  // A start address that leaves room for `n` items.
  auto start = [&](std::size_t n) {
    return static_cast<std::uint16_t>(rng() % (0x10000 - n + 1));
  };
  switch (rng() % 7) {
    case 0: {
      std::uint16_t n = 1 + rng() % kMaxReadCoils;
      return read_coils_request(start(n), n);
    }
    case 1: {
      std::uint16_t n = 1 + rng() % kMaxReadRegisters;
      return read_holding_registers_request(start(n), n);
    }
    case 2: return write_single_coil_request(u16(), rng() & 1);
    case 3: return write_single_register_request(u16(), u16());
    case 4: {
      auto v = bits(1 + rng() % kMaxWriteCoils);
      return write_multiple_coils_request(start(v.size()), v);
    }
    case 5: {
      std::vector<std::uint16_t> regs(1 + rng() % kMaxWriteRegisters);
      for (auto& r : regs) r = u16();
      return write_multiple_registers_request(start(regs.size()), regs);
    }
    default: {
      static const std::uint8_t fns[] = {fc::kReadCoils, fc::kReadHoldingRegisters,
                                         fc::kWriteSingleCoil, fc::kWriteMultipleRegisters};
      return exception_response(fns[rng() % 4], static_cast<std::uint8_t>(1 + rng() % 4));
    }
  }
}

void codec_properties(Check& c) {
  using namespace modbus;
  Rng rng(77);
  std::size_t round_trips = 0;
  for (int i = 0; i < 10000; ++i) {
    Pdu pdu = random_request(rng);
    MbapHeader h;
    h.transaction_id = static_cast<std::uint16_t>(rng());
    h.unit_id = static_cast<std::uint8_t>(rng());
    Bytes wire = encode_frame(h, pdu);
    c.expect(wire == reference_frame(h.transaction_id, h.unit_id, pdu),
             "encoding differs from reference, case " + std::to_string(i));
    try {
      Frame f = decode_frame(wire);
      bool same = f.pdu == pdu && f.header.transaction_id == h.transaction_id &&
                  f.header.unit_id == h.unit_id && f.header.protocol_id == 0 &&
                  encode_frame(f.header, f.pdu) == wire;
      c.expect(same, "decode mismatch, case " + std::to_string(i));
      if (same) ++round_trips;
    } catch (const std::exception& e) {
      c.fail("case " + std::to_string(i) + ": " + e.what());
    }
  }

  std::size_t decoded = 0;
  std::size_t rejected = 0;
  for (int i = 0; i < 100000; ++i) {
    Bytes junk = random_bytes(rng, rng() % 300);
    // Half the inputs get a plausible header so the decoder goes deeper.
    if (i % 2 == 0 && junk.size() >= kMbapSize) {
      junk[2] = junk[3] = 0;
      std::size_t len = junk.size() - 6;
      junk[4] = static_cast<std::uint8_t>(len >> 8);
      junk[5] = static_cast<std::uint8_t>(len);
    }
    try {
      decode_frame(junk);
      ++decoded;
    } catch (const ModbusError&) {
      ++rejected;
    } catch (const std::exception& e) {
      c.fail(std::string("non-codec exception: ") + e.what());
    }
  }
  c.note = std::to_string(round_trips) + "/10000 round trips; 100000 random inputs (" +
           std::to_string(decoded) + " decoded, " + std::to_string(rejected) + " rejected)";
}

// ---------------------------------------------------------------------------
// 8

void logic_oracle(Check& c) {
  testing::ProgramGen gen(31337);
  int programs = 0;
  std::size_t evaluations = 0;
  for (; programs < 600; ++programs) {
    testing::OProgram op = gen.program();
    std::string src = gen.render(op);
    if (op.inputs + op.outputs > 4 || op.body.size() > 3) {
      c.fail("generator exceeded bounds");
      continue;
    }
    try {
      auto b = logic::compile(src, {8, 8, 0, 0});
      for (std::uint32_t bits = 0; bits < (1u << op.inputs); ++bits) {
        logic::ProcessImage img = logic::ProcessImage::zeros(b.shape());
        for (int i = 0; i < op.inputs; ++i) img.input_bits[i] = (bits >> i) & 1;
        logic::ProcessImage out = logic::eval_cycle(b, img);
        std::vector<bool> want = testing::oracle_outputs(op, bits);
        bool agree = true;
        for (int j = 0; j < op.outputs; ++j) agree = agree && want[j] == out.output_bits[j];
        c.expect(agree, "disagreement on inputs " + std::to_string(bits) + ":\n" + src);
        ++evaluations;
      }
    } catch (const std::exception& e) {
      c.fail(std::string(e.what()) + "\n" + src);
    }
  }
  c.note = std::to_string(programs) + " programs, " + std::to_string(evaluations) +
           " input vectors";
}

// ---------------------------------------------------------------------------
// 9

void scenario_safety(Check& c) {
  constexpr std::uint64_t kWarmup = 10;
  constexpr std::uint64_t kCycles = 10000;

  // Tank, enhanced installation, lockstep on the virtual clock.
  TestbedConfig config;
  config.mode = Mode::kEnhanced;
  config.scenario = ScenarioKind::kTank;
  config.seed = 9;
  config.cycles = kWarmup + kCycles;
  plant::TankScenario* tank = nullptr;
  double lo = 1, hi = 0;
  std::uint64_t checked = 0;
  runtime::RuntimeHooks hooks;
  hooks.cycle_end = [&](std::uint64_t n) {
    if (tank == nullptr || n <= kWarmup) return;
    const plant::TankConfig& tc = tank->config();
    plant::TankState s = tank->state();
    // One cycle of sensing lag in each direction.
    double slack = 2 * std::max(s.inflow_rate, s.outflow_rate) * 0.020;
    c.expect(s.level >= tc.low_mark - slack && s.level <= tc.high_mark + slack,
             "cycle " + std::to_string(n) + ": level " + fmt(s.level));
    lo = std::min(lo, s.level);
    hi = std::max(hi, s.level);
    ++checked;
  };
  Testbed tb(config, hooks);
  tank = dynamic_cast<plant::TankScenario*>(&tb.scenario());
  auto result = tb.run();
  c.expect(!result.error, "tank run: " + result.error.value_or(""));
  c.expect(checked == kCycles, "tank checked " + std::to_string(checked) + " cycles");

  std::size_t closures = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    TestbedConfig g;
    g.mode = Mode::kEnhanced;
    g.scenario = ScenarioKind::kGenerator;
    g.seed = seed;
    g.cycles = 1000;
    Testbed gen(g);
    auto r = gen.run();
    c.expect(!r.error, "generator seed " + std::to_string(seed) + ": " + r.error.value_or(""));
    auto* scenario = dynamic_cast<plant::GeneratorScenario*>(&gen.scenario());
    auto list = scenario->closures();
    c.expect(!list.empty(), "generator seed " + std::to_string(seed) + ": breakers never closed");
    for (const auto& cl : list) {
      c.expect(std::abs(cl.delta) < kSyncThreshold,
               "seed " + std::to_string(seed) + " CB" + std::to_string(cl.breaker) +
                   " closed at |delta| " + std::to_string(std::abs(cl.delta)));
    }
    closures += list.size();
  }
  c.note = "tank level in [" + fmt(lo, 3) + ", " + fmt(hi, 3) + "] over " +
           std::to_string(checked) + " cycles; " + std::to_string(closures) +
           " closures over 50 seeds";
}

// ---------------------------------------------------------------------------
// 10

void anti_rollback(Check& c) {
  auto dir = std::filesystem::temp_directory_path() /
             ("tzplc-acceptance-rollback-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  TestbedConfig config;
  config.mode = Mode::kEnhanced;
  config.seed = 10;
  config.cycles = 2;
  config.state_dir = dir;

  // Version 2 loads in a separate process, which then exits.
  std::fflush(nullptr);
  pid_t child = ::fork();
  if (child == 0) {
    TestbedConfig v2 = config;
    v2.ta_version = 2;
    int code = 1;
    try {
      Testbed tb(v2);
      code = tb.run().error ? 1 : 0;
    } catch (...) {
    }
    std::_Exit(code);
  }
  int status = 0;
  ::waitpid(child, &status, 0);
  c.expect(WIFEXITED(status) && WEXITSTATUS(status) == 0, "version 2 did not load");

  TestbedConfig v1 = config;
  v1.ta_version = 1;
  Testbed tb(v1);
  auto result = tb.run();
  c.expect(result.error_name == "VersionRollback",
           "version 1 after restart: " + result.error_name.value_or("loaded"));
  c.expect(result.summary.cycles == 0, "rolled-back TA ran cycles");

  TestbedConfig v3 = config;
  v3.ta_version = 3;
  Testbed up(v3);
  c.expect(!up.run().error, "version 3 did not load after the rejection");
  std::filesystem::remove_all(dir);
  c.note = "v2 in pid " + std::to_string(child) + ", v1 -> " + result.error_name.value_or("-");
}

int run_all() {
  std::vector<Criterion> criteria = {
      {1, "security matrix", security_matrix},
      {2, "linear scaling", linear_scaling},
      {3, "mode ordering and accounting", ordering_and_accounting},
      {4, "functional equivalence", functional_equivalence},
      {5, "entry-point protocol", entry_protocol},
      {6, "channel properties", channel_properties},
      {7, "codec properties", codec_properties},
      {8, "logic oracle equivalence", logic_oracle},
      {9, "scenario safety", scenario_safety},
      {10, "anti-rollback", anti_rollback},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    Check check;
    try {
      crit.body(check);
    } catch (const std::exception& e) {
      check.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %2d %s%s%s%s\n", check.ok() ? "PASS" : "FAIL", crit.number,
                crit.name.c_str(), check.note.empty() ? "" : " - ", check.note.c_str(),
                check.ok() ? "" : check.summary().c_str());
    std::fflush(stdout);
    if (!check.ok()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace tzplc::acceptance

int main() { return tzplc::acceptance::run_all(); }
