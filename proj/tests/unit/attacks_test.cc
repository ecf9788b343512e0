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

#include <gtest/gtest.h>

#include "tzplc/attacks/attacks.h"

namespace tzplc::attacks {
namespace {

using runtime::Mode;

std::string evidence_text(const AttackOutcome& o) {
  std::string s;
  for (const auto& e : o.evidence) s += e.kind + ": " + e.detail + "\n";
  return s;
}

TEST(Attacks, ExpectedTable) {
  EXPECT_EQ(Verdict::kSucceeded, expected_verdict(Vector::kFalseDataInjection, Mode::kMinimal));
  EXPECT_EQ(Verdict::kBlocked, expected_verdict(Vector::kFalseDataInjection, Mode::kEnhanced));
  EXPECT_EQ(Verdict::kBlocked, expected_verdict(Vector::kLogicInjection, Mode::kMinimal));
  EXPECT_EQ(Verdict::kBlocked, expected_verdict(Vector::kLogicTheft, Mode::kMinimal));
  EXPECT_EQ(Verdict::kSucceeded, expected_verdict(Vector::kIoMemoryManipulation, Mode::kMinimal));
  EXPECT_EQ(Verdict::kNotApplicable, expected_verdict(Vector::kDataTheft, Mode::kMinimal));
  EXPECT_EQ(Verdict::kBlocked, expected_verdict(Vector::kDataTheft, Mode::kEnhanced));
  EXPECT_EQ(Verdict::kOutOfScope,
            expected_verdict(Vector::kFirmwareModification, Mode::kEnhanced));
}

TEST(Attacks, VectorNames) {
  EXPECT_EQ(Vector::kIoMemoryManipulation, vector_from_string("d"));
  EXPECT_EQ(Vector::kDataTheft, vector_from_string("data_theft"));
  try {
    vector_from_string("z");
    FAIL();
  } catch (const AttackError& e) {
    EXPECT_EQ(AttackErrc::kConfigError, e.code());
  }
  EXPECT_EQ("(c) Theft of Control Logic", title(Vector::kLogicTheft));
}

TEST(Attacks, EnhancedMitmIsBlocked) {
  auto o = mitm_tamper(make_attack(Vector::kFalseDataInjection, Mode::kEnhanced));
  EXPECT_EQ(Verdict::kBlocked, o.verdict) << evidence_text(o);
  EXPECT_TRUE(o.has("tamper"));
  EXPECT_TRUE(o.has("stale"));
  EXPECT_FALSE(o.has("divergence"));
}

TEST(Attacks, MinimalForgedReplySucceeds) {
  auto s = make_attack(Vector::kFalseDataInjection, Mode::kMinimal);
  s.params.mutation = Mutation::kForge;
  auto o = mitm_tamper(s);
  EXPECT_EQ(Verdict::kSucceeded, o.verdict) << evidence_text(o);
  EXPECT_TRUE(o.has("divergence"));
}

TEST(Attacks, EnhancedForgedRecordIsBlocked) {
  auto s = make_attack(Vector::kFalseDataInjection, Mode::kEnhanced);
  s.params.mutation = Mutation::kForge;
  EXPECT_EQ(Verdict::kBlocked, mitm_tamper(s).verdict);
}

TEST(Attacks, IdentityMutationIsNotApplicable) {
  for (Mode m : {Mode::kBaseline, Mode::kEnhanced}) {
    auto s = make_attack(Vector::kFalseDataInjection, m);
    s.params.mutation = Mutation::kIdentity;
    auto o = mitm_tamper(s);
    EXPECT_EQ(Verdict::kNotApplicable, o.verdict) << evidence_text(o);
  }
}

TEST(Attacks, UnknownLinkIsConfigError) {
  auto s = make_attack(Vector::kFalseDataInjection, Mode::kMinimal);
  s.params.target = "nope";
  EXPECT_THROW(mitm_tamper(s), AttackError);
}

TEST(Attacks, IoMemoryByMode) {
  auto enhanced = tamper_io_memory(make_attack(Vector::kIoMemoryManipulation, Mode::kEnhanced));
  EXPECT_EQ(Verdict::kBlocked, enhanced.verdict) << evidence_text(enhanced);
  EXPECT_NE(std::string::npos, evidence_text(enhanced).find("shared-memory snapshot"));
  auto minimal = tamper_io_memory(make_attack(Vector::kIoMemoryManipulation, Mode::kMinimal));
  EXPECT_EQ(Verdict::kSucceeded, minimal.verdict) << evidence_text(minimal);
  EXPECT_TRUE(minimal.has("divergence"));
  auto baseline = tamper_io_memory(make_attack(Vector::kIoMemoryManipulation, Mode::kBaseline));
  EXPECT_EQ(Verdict::kSucceeded, baseline.verdict);
}

TEST(Attacks, IoMemoryForcedValueEqualToInputChangesNothing) {
  auto s = make_attack(Vector::kIoMemoryManipulation, Mode::kMinimal);
  testbed::Testbed probe(s.testbed);
  bool sensor = static_cast<const plant::LoopbackScenario&>(probe.scenario()).sensor_values()[0];
  s.params.value = sensor ? 1 : 0;
  EXPECT_EQ(Verdict::kNotApplicable, tamper_io_memory(s).verdict);
  s.params.value = sensor ? 0 : 1;
  EXPECT_EQ(Verdict::kSucceeded, tamper_io_memory(s).verdict);
}

TEST(Attacks, IoMemoryDeadInputIsNotApplicable) {
  auto s = make_attack(Vector::kIoMemoryManipulation, Mode::kMinimal);
  s.testbed.pairs = 2;
  s.testbed.program =
      "PROGRAM p\n  VAR\n    A AT %IX0.0 : BOOL;\n    B AT %IX0.1 : BOOL;\n"
      "    X AT %QX0.0 : BOOL;\n    Y AT %QX0.1 : BOOL;\n  END_VAR\n"
      "  X := A;\n  Y := A;\nEND_PROGRAM\n";
  s.params.target = "%IX0.1";
  auto o = tamper_io_memory(s);
  EXPECT_EQ(Verdict::kNotApplicable, o.verdict) << evidence_text(o);
}

TEST(Attacks, IoMemoryUnknownAddress) {
  auto s = make_attack(Vector::kIoMemoryManipulation, Mode::kMinimal);
  for (std::string target : {"%IX3.0", "%IW0", "bogus"}) {
    s.params.target = target;
    try {
      tamper_io_memory(s);
      FAIL() << target;
    } catch (const AttackError& e) {
      EXPECT_EQ(AttackErrc::kAddressUnknown, e.code()) << target;
    }
  }
}

TEST(Attacks, LogicInjectionVariantsRejected) {
  auto o = inject_logic(make_attack(Vector::kLogicInjection, Mode::kEnhanced));
  EXPECT_EQ(Verdict::kBlocked, o.verdict) << evidence_text(o);
  std::string text = evidence_text(o);
  EXPECT_NE(std::string::npos, text.find("unsigned manifest: BadSignature")) << text;
  EXPECT_NE(std::string::npos, text.find("downgraded manifest: VersionRollback")) << text;
  EXPECT_EQ(3, std::count_if(o.evidence.begin(), o.evidence.end(),
                             [](const Evidence& e) { return e.kind == "rejected"; }));
}

TEST(Attacks, LogicInjectionSucceedsOnBaseline) {
  auto o = inject_logic(make_attack(Vector::kLogicInjection, Mode::kBaseline));
  EXPECT_EQ(Verdict::kSucceeded, o.verdict) << evidence_text(o);
  EXPECT_TRUE(o.has("divergence"));
}

TEST(Attacks, TheftByMode) {
  auto baseline = steal_logic_and_keys(make_attack(Vector::kLogicTheft, Mode::kBaseline));
  EXPECT_EQ(Verdict::kSucceeded, baseline.verdict);
  EXPECT_NE(std::string::npos, evidence_text(baseline).find("file plc.st at offset"));
  for (Mode m : {Mode::kMinimal, Mode::kEnhanced}) {
    auto c = steal_logic_and_keys(make_attack(Vector::kLogicTheft, m));
    EXPECT_EQ(Verdict::kBlocked, c.verdict) << evidence_text(c);
    EXPECT_TRUE(c.has("scan"));
  }
  auto e = steal_logic_and_keys(make_attack(Vector::kDataTheft, Mode::kEnhanced));
  EXPECT_EQ(Verdict::kBlocked, e.verdict) << evidence_text(e);
  EXPECT_EQ(Verdict::kNotApplicable,
            steal_logic_and_keys(make_attack(Vector::kDataTheft, Mode::kMinimal)).verdict);
}

TEST(Attacks, FirmwareIsOutOfScopeWithLoadCheck) {
  auto o = firmware_modification(make_attack(Vector::kFirmwareModification, Mode::kMinimal));
  EXPECT_EQ(Verdict::kOutOfScope, o.verdict);
  EXPECT_TRUE(o.has("rejected")) << evidence_text(o);
}

TEST(Attacks, KillSupplicant) {
  auto config = default_attack_testbed(Mode::kEnhanced);
  config.cycles = 12;
  auto killed = kill_supplicant(config, {5, false});
  EXPECT_EQ(Verdict::kSucceeded, killed.verdict) << evidence_text(killed);
  EXPECT_NE(std::string::npos, evidence_text(killed).find("TaFailure after 5 of 12"));
  auto restored = kill_supplicant(config, {5, true});
  EXPECT_EQ(Verdict::kBlocked, restored.verdict) << evidence_text(restored);
  config.mode = Mode::kMinimal;
  EXPECT_EQ(Verdict::kSucceeded, kill_supplicant(config, {3, false}).verdict);
  config.mode = Mode::kBaseline;
  EXPECT_EQ(Verdict::kNotApplicable, kill_supplicant(config, {3, false}).verdict);
}

TEST(Attacks, SameSeedSameEvidenceHash) {
  for (Vector v : {Vector::kFalseDataInjection, Vector::kIoMemoryManipulation,
                   Vector::kLogicTheft}) {
    auto s = make_attack(v, Mode::kMinimal, 7);
    auto a = run_attack(s);
    auto b = run_attack(s);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.evidence_hash(), b.evidence_hash()) << evidence_text(a) << evidence_text(b);
  }
}

TEST(Attacks, FullMatrixMatchesAndWitnessesSuccesses) {
  std::vector<Vector> all(std::begin(kAllVectors), std::end(kAllVectors));
  Matrix m = run_matrix({Mode::kBaseline, Mode::kMinimal, Mode::kEnhanced}, all);
  ASSERT_EQ(18u, m.cells.size());
  for (const auto& c : m.cells) {
    EXPECT_TRUE(c.matches()) << letter(c.vector) << "/" << runtime::to_string(c.mode) << "\n"
                             << evidence_text(c.outcome);
    if (c.outcome.verdict == Verdict::kSucceeded) {
      EXPECT_TRUE(c.outcome.has("divergence") || c.outcome.has("leak") ||
                  c.outcome.has("availability"));
    }
  }
  EXPECT_NO_THROW(check_matrix(m));
  std::string table = render_table(m);
  EXPECT_NE(std::string::npos, table.find("(e) Data Theft and Misuse"));
  EXPECT_NE(std::string::npos, table.find("Secure Boot"));
  EXPECT_NE(std::string::npos, table.find("blank = not protected"));
  auto j = to_json(m);
  EXPECT_TRUE(j["matches"].get<bool>());
}

TEST(Attacks, MismatchListsCells) {
  Matrix m = run_matrix({Mode::kEnhanced}, {Vector::kFalseDataInjection});
  ASSERT_EQ(1u, m.cells.size());
  EXPECT_EQ(Verdict::kBlocked, m.cells[0].outcome.verdict);
  m.cells[0].expected = Verdict::kSucceeded;
  try {
    check_matrix(m);
    FAIL();
  } catch (const AttackError& e) {
    EXPECT_EQ(AttackErrc::kMatrixMismatch, e.code());
    EXPECT_NE(std::string::npos, std::string(e.what()).find("a/enhanced"));
  }
  EXPECT_NE(std::string::npos, render_table(m).find("! differs"));
}

TEST(Attacks, ScenarioJson) {
  auto s = make_attack(Vector::kIoMemoryManipulation, Mode::kMinimal, 9);
  s.params.value = 1;
  s.params.to_cycle = 20;
  auto back = attack_from_json(to_json(s));
  EXPECT_EQ(s.vector, back.vector);
  EXPECT_EQ(s.mode(), back.mode());
  EXPECT_EQ(s.testbed.seed, back.testbed.seed);
  EXPECT_EQ(s.params.target, back.params.target);
  EXPECT_EQ(s.params.value, back.params.value);
  EXPECT_EQ(s.params.to_cycle, back.params.to_cycle);
  EXPECT_EQ(s.expected, back.expected);
  EXPECT_THROW(attack_from_json({{"vector", "q"}}), AttackError);
  EXPECT_THROW(attack_from_json({{"mode", "enhanced"}}), AttackError);
}

}  // namespace
}  // namespace tzplc::attacks
