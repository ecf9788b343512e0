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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with `args`; stdout is captured, stderr discarded.
Result tzplc(const std::string& args) {
  std::string cmd = std::string(TZPLC_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tzplc-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }

  fs::path dir_;
};

TEST_F(Cli, HelpAndUsage) {
  EXPECT_EQ(0, tzplc("--help").code);
  EXPECT_EQ(2, tzplc("").code);
  EXPECT_EQ(2, tzplc("frobnicate").code);
  EXPECT_EQ(2, tzplc("run --mode turbo").code);
  EXPECT_EQ(2, tzplc("run --clock sundial").code);
}

TEST_F(Cli, UnknownConfigKeyRejected) {
  EXPECT_EQ(2, tzplc("run --config " + write("c.json", R"({"mode":"minimal","colour":1})")).code);
  EXPECT_EQ(2, tzplc("run --config " + write("d.json", "{not json")).code);
}

TEST_F(Cli, BaselineZeroCycles) {
  Result r = tzplc("run --mode baseline --cycles 0");
  EXPECT_EQ(0, r.code);
  EXPECT_EQ("", r.out);
}

TEST_F(Cli, RunEmitsOneReportPerCycle) {
  Result r = tzplc("run --mode enhanced --cycles 4 --seed 2");
  ASSERT_EQ(0, r.code);
  std::istringstream in(r.out);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(++n, j["cycle"].get<int>());
    EXPECT_EQ(280000, j["phases_ns"]["world_switch"].get<int>());
  }
  EXPECT_EQ(4, n);
}

TEST_F(Cli, FlagsOverrideConfig) {
  std::string cfg = write("c.json", R"({"mode":"enhanced","cycles":50})");
  Result r = tzplc("run --config " + cfg + " --mode baseline --cycles 2");
  ASSERT_EQ(0, r.code);
  auto first = nlohmann::json::parse(r.out.substr(0, r.out.find('\n')));
  EXPECT_EQ(0, first["phases_ns"]["world_switch"].get<int>());
}

TEST_F(Cli, KeygenBuildDeployRun) {
  std::string keys = (dir_ / "keys").string();
  ASSERT_EQ(0, tzplc("keygen --seed 4 --out " + keys).code);
  for (const char* f : {"authority.key", "authority.pub", "device.key", "device.pub"}) {
    EXPECT_TRUE(fs::exists(dir_ / "keys" / f)) << f;
  }
  std::string cfg = write("c.json", R"({"mode":"enhanced","seed":4,"base_port":42310})");
  std::string ta = (dir_ / "plc.ta").string();
  ASSERT_EQ(0, tzplc("build-ta --config " + cfg + " --key " + keys + "/authority.key --device-pub " +
                     keys + "/device.pub --out " + ta)
                   .code);
  EXPECT_EQ(0, tzplc("run --config " + cfg + " --deploy " + ta + " --cycles 3").code);

  // A TA signed by some other authority does not load.
  std::string other = (dir_ / "other").string();
  ASSERT_EQ(0, tzplc("keygen --seed 5 --out " + other).code);
  ASSERT_EQ(0, tzplc("build-ta --config " + cfg + " --key " + other + "/authority.key --out " + ta)
                   .code);
  EXPECT_EQ(4, tzplc("run --config " + cfg + " --deploy " + ta + " --cycles 3").code);
}

TEST_F(Cli, BuildTaErrors) {
  std::string cfg = write("c.json", R"({"mode":"enhanced","base_port":42320})");
  std::string out = (dir_ / "x.ta").string();
  EXPECT_EQ(9, tzplc("build-ta --config " + cfg + " --key " + cfg + " --out " + out).code);
  std::string bad = write("bad.st", "PROGRAM p\nVAR END_VAR\nq := 1;\nEND_PROGRAM\n");
  EXPECT_EQ(5, tzplc("build-ta --config " + cfg + " --source " + bad + " --out " + out).code);
  EXPECT_EQ(2, tzplc("build-ta --mode enhanced --out " + out).code);
  EXPECT_EQ(2, tzplc("build-ta --mode baseline --out " + out).code);
}

TEST_F(Cli, AttackVerdicts) {
  Result r = tzplc("attack --vector a --mode minimal");
  ASSERT_EQ(0, r.code);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ("succeeded", j["verdict"]);
  EXPECT_EQ("succeeded", j["expected"]);
  EXPECT_EQ("blocked", nlohmann::json::parse(tzplc("attack --vector d --mode enhanced").out)["verdict"]);
  EXPECT_EQ(2, tzplc("attack --vector z").code);
  EXPECT_EQ(2, tzplc("attack --vector d --target %QX9.9").code);
}

TEST_F(Cli, BenchFormats) {
  std::string csv = (dir_ / "b.csv").string();
  ASSERT_EQ(0, tzplc("bench --mode baseline,enhanced --pairs 1,2,4 --format csv --out " + csv).code);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ("mode,pairs,avg_ms,std_ms,max_ms", header);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(6, rows);
  EXPECT_EQ(7, tzplc("bench --cycles 10").code);
  EXPECT_EQ(2, tzplc("bench --format pdf").code);
  EXPECT_EQ(8, tzplc("bench --pairs 1 --out /nonexistent-dir/b.csv").code);
}

TEST_F(Cli, MatrixJson) {
  Result r = tzplc("matrix --modes enhanced --vectors a,b --format json");
  ASSERT_EQ(0, r.code);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(2u, j["cells"].size());
  EXPECT_TRUE(j["matches"].get<bool>());
}

}  // namespace
