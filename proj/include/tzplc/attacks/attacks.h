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

#ifndef TZPLC_ATTACKS_ATTACKS_H_
#define TZPLC_ATTACKS_ATTACKS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tzplc/common/bytes.h"
#include "tzplc/common/error.h"
#include "tzplc/runtime/config.h"
#include "tzplc/testbed/testbed.h"

// Attack injectors. The attacker has root in the normal world and acts
// through the same positions a real one would have:
//   - the normal-world network stack (link interposer)
//   - normal-world memory at the runtime's hook points
//   - the normal-world file system (the testbed's state directory)
// Every outcome compares an attacked run against the same installation run
// without the attack.
namespace tzplc::attacks {

enum class AttackErrc {
  kConfigError,
  kAddressUnknown,
  kMatrixMismatch,
};

std::string_view module_name(AttackErrc);
std::string_view to_string(AttackErrc code);
using AttackError = CodedError<AttackErrc>;

enum class Vector {
  kFalseDataInjection,    // (a)
  kLogicInjection,        // (b)
  kLogicTheft,            // (c)
  kIoMemoryManipulation,  // (d)
  kDataTheft,             // (e)
  kFirmwareModification,  // (f)
};

inline constexpr Vector kAllVectors[] = {
    Vector::kFalseDataInjection, Vector::kLogicInjection,        Vector::kLogicTheft,
    Vector::kIoMemoryManipulation, Vector::kDataTheft, Vector::kFirmwareModification};

std::string_view to_string(Vector v);
char letter(Vector v);
// "(a) False Data Injection" and so on.
std::string_view title(Vector v);
// Accepts the snake_case name or the letter. Throws kConfigError.
Vector vector_from_string(std::string_view name);

enum class Verdict { kBlocked, kSucceeded, kNotApplicable, kOutOfScope };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view name);

// The outcome each (vector, mode) cell is expected to have, including the
// unprotected baseline.
Verdict expected_verdict(Vector v, runtime::Mode mode);

struct Evidence {
  // divergence, rejected, stale, tamper, leak, scan, availability, note
  std::string kind;
  std::string detail;

  bool operator==(const Evidence&) const = default;
};

struct AttackOutcome {
  std::string attack;
  runtime::Mode mode = runtime::Mode::kEnhanced;
  Verdict verdict = Verdict::kNotApplicable;
  std::vector<Evidence> evidence;

  // Hex SHA-256 over attack, mode, verdict and evidence.
  std::string evidence_hash() const;
  bool has(std::string_view kind) const;
};

enum class Mutation {
  kIdentity,  // observe only
  kBitFlip,   // flip the lowest bit of the frame's last byte
  kForge,     // replace the reply payload with attacker-chosen bytes
};

std::string_view to_string(Mutation m);
Mutation mutation_from_string(std::string_view name);

struct AttackParams {
  // (a): slave link name; empty means every sensor link.
  // (d): located address such as "%IX0.0".
  std::string target;
  // (d): forced value. Default: the complement of what the PLC holds.
  std::optional<std::int32_t> value;
  Mutation mutation = Mutation::kBitFlip;
  // Cycles [from_cycle, to_cycle] during which the attack is active.
  std::uint64_t from_cycle = 5;
  std::uint64_t to_cycle = UINT64_MAX;
};

// One cell to evaluate. `expected` is fixed when the scenario is made.
struct AttackScenario {
  Vector vector = Vector::kFalseDataInjection;
  testbed::TestbedConfig testbed;
  AttackParams params;
  Verdict expected = Verdict::kNotApplicable;

  runtime::Mode mode() const { return testbed.mode; }
};

// Default installation for attack runs: one loopback pair with constant
// sensors, 30 cycles on the virtual clock.
testbed::TestbedConfig default_attack_testbed(runtime::Mode mode, std::uint64_t seed = 1);

AttackScenario make_attack(Vector v, runtime::Mode mode, std::uint64_t seed = 1);

AttackScenario attack_from_json(const nlohmann::json& j);
nlohmann::json to_json(const AttackScenario& s);

// (a) Man-in-the-middle on sensor links.
AttackOutcome mitm_tamper(const AttackScenario& s);
// (d) Writes to the PLC's I/O memory as far as the normal world can reach it.
// Errors: AddressUnknown when the address is outside the image.
AttackOutcome tamper_io_memory(const AttackScenario& s);
// (b) Rogue TA manifests (unsigned, foreign-signed, downgraded) or, in the
// baseline, an overwritten program file.
AttackOutcome inject_logic(const AttackScenario& s);
// (c) and (e): scans everything the normal world can read for the program's
// canary token or for credential bytes.
AttackOutcome steal_logic_and_keys(const AttackScenario& s);
// (f) Not simulated. Records that a tampered manifest fails the load-time
// signature check and reports the cell as out of scope.
AttackOutcome firmware_modification(const AttackScenario& s);

// Dispatches on s.vector.
AttackOutcome run_attack(const AttackScenario& s);

struct KillParams {
  // The supplicant dies after this cycle completes.
  std::uint64_t kill_after = 5;
  // Restarted before the next cycle's first invoke.
  bool restore_before_next = false;
};

// Availability attack on the supplicant daemon. Not one of the matrix
// vectors: it succeeds by design.
AttackOutcome kill_supplicant(const testbed::TestbedConfig& config, const KillParams& params);

struct MatrixCell {
  Vector vector = Vector::kFalseDataInjection;
  runtime::Mode mode = runtime::Mode::kEnhanced;
  Verdict expected = Verdict::kNotApplicable;
  AttackOutcome outcome;

  bool matches() const { return outcome.verdict == expected; }
};

struct Matrix {
  std::vector<runtime::Mode> modes;
  std::vector<Vector> vectors;
  std::vector<MatrixCell> cells;  // vector-major

  const MatrixCell* cell(Vector v, runtime::Mode m) const;
  std::vector<const MatrixCell*> mismatches() const;
};

// Evaluates every (mode, vector) cell with make_attack(v, mode, seed).
Matrix run_matrix(const std::vector<runtime::Mode>& modes, const std::vector<Vector>& vectors,
                  std::uint64_t seed = 1);

// Throws MatrixMismatch naming each cell that differs from expectation.
void check_matrix(const Matrix& m);

nlohmann::json to_json(const AttackOutcome& o);
nlohmann::json to_json(const Matrix& m);
// Table layout: one row per vector, one column per mode, with a legend.
std::string render_table(const Matrix& m);

}  // namespace tzplc::attacks

#endif  // TZPLC_ATTACKS_ATTACKS_H_
