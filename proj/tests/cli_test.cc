// Copyright 2026 The mmsalloc Authors
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

// Drives the mmsalloc binary end to end: exit codes, output formats, and
// JSON round trips.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"
#include "mmsalloc/harness.h"
#include "mmsalloc/io.h"

namespace mmsalloc {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int exit_code;
  std::string out;
};

CliRun Cli(const std::string& args) {
  const std::string command =
      std::string(MMSALLOC_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  std::string out;
  std::array<char, 4096> buffer;
  size_t got;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
    out.append(buffer.data(), got);
  }
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mmsalloc_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string Path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, TpsPrintsExactValue) {
  const std::string f = Write(
      "i.json", R"({"n": 3, "m": 3, "valuations": [[1,1,1],[1,1,1],[1,1,1]]})");
  const CliRun r = Cli("tps --instance " + f + " --agent 0");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "1\n");
}

TEST_F(CliTest, SolveTightnessWithOracleThresholds) {
  ASSERT_EQ(Cli("gen --family tightness --n 3 --out " + Path("t.json"))
                .exit_code,
            0);
  const CliRun r =
      Cli("solve --instance " + Path("t.json") + " --alpha-mode oracle --json");
  ASSERT_EQ(r.exit_code, 0);
  const Json out = Json::parse(r.out);
  EXPECT_EQ(out["min_ratio_to_mms"], "7/9");
  EXPECT_TRUE(out["failed_agents"].empty());
  const Allocation a = AllocationFromJson(out["allocation"]);
  EXPECT_NO_THROW(ValidateAllocation(a, 3, 9));
  EXPECT_EQ(a.satisfied, (std::vector<int>{0, 1, 2}));
  ASSERT_EQ(out["trace"].size(), 3u);
  EXPECT_EQ(out["trace"][0]["event"], "reduction");
  EXPECT_EQ(out["trace"][0]["rule"], "R0");
}

TEST_F(CliTest, SolveWithUnreachableThresholdsExitsTwo) {
  const std::string inst =
      Write("i.json", R"({"n": 2, "m": 3, "valuations": [[3,1,2],["1/2",2,3]]})");
  // Twice each agent's total is above every maximin share and out of reach.
  const std::string alpha = Write("a.json", R"({"alpha": [12, 11]})");
  const CliRun r = Cli("solve --instance " + inst + " --alpha " + alpha + " --json");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_FALSE(Json::parse(r.out)["failed_agents"].empty());
}

TEST_F(CliTest, FptasJsonHasDocumentedFields) {
  const std::string inst =
      Write("i.json", R"({"n": 2, "m": 3, "valuations": [[4,3,3],[4,3,3]]})");
  const CliRun r = Cli("fptas --instance " + inst + " --epsilon 1/10 --json");
  ASSERT_EQ(r.exit_code, 0);
  const Json out = Json::parse(r.out);
  EXPECT_EQ(out["iterations"], 1);
  EXPECT_EQ(out["final_alpha"], Json::parse(R"(["5", "5"])"));
  EXPECT_TRUE(out["per_iteration_failures"].empty());
  EXPECT_NO_THROW(ValidateAllocation(AllocationFromJson(out["allocation"]), 2, 3));
}

TEST_F(CliTest, OracleReportsWitness) {
  const std::string inst =
      Write("i.json", R"({"n": 2, "m": 4, "valuations": [[3,1,1,1],[1,1,1,1]]})");
  const CliRun r = Cli("oracle --instance " + inst + " --agent 0 --json");
  ASSERT_EQ(r.exit_code, 0);
  const Json out = Json::parse(r.out);
  EXPECT_EQ(out["mms"], "3");
  EXPECT_EQ(out["partition"].size(), 2u);
}

TEST_F(CliTest, VerifyRoundTripsSolveOutput) {
  ASSERT_EQ(Cli("gen --family uniform --n 3 --m 8 --seed 5 --out " +
                Path("u.json"))
                .exit_code,
            0);
  const CliRun solved =
      Cli("solve --instance " + Path("u.json") + " --alpha-mode oracle --json");
  ASSERT_EQ(solved.exit_code, 0);
  const Json out = Json::parse(solved.out);
  const std::string alloc = Write("alloc.json", out["allocation"].dump());
  const CliRun verified = Cli("verify --instance " + Path("u.json") +
                           " --allocation " + alloc + " --oracle --json");
  ASSERT_EQ(verified.exit_code, 0);
  const Json report = Json::parse(verified.out);
  EXPECT_EQ(report["min_ratio_to_mms"], out["min_ratio_to_mms"]);
}

TEST_F(CliTest, GenIsDeterministic) {
  const CliRun a = Cli("gen --family bimodal --n 2 --m 6 --seed 9");
  const CliRun b = Cli("gen --family bimodal --n 2 --m 6 --seed 9");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(InstanceFromJson(Json::parse(a.out)).num_items(), 6);
}

TEST_F(CliTest, CampaignWritesCsv) {
  const std::string config = Write("c.json", R"({
    "families": ["uniform"], "sizes": [[2, 5]], "seeds": [1, 2],
    "epsilon_grid": ["1/4"]})");
  const CliRun r = Cli("campaign --config " + config + " --out " + Path("o.csv"));
  EXPECT_EQ(r.exit_code, 0);
  std::ifstream in(Path("o.csv"));
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header,
            "family,n,m,seed,epsilon,min_ratio_num,min_ratio_den,iterations,"
            "failures,reductions_fired");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST_F(CliTest, ErrorsExitOne) {
  EXPECT_EQ(Cli("solve --instance " + Path("missing.json")).exit_code, 1);
  const std::string bad = Write("bad.json", "{not json");
  EXPECT_EQ(Cli("solve --instance " + bad).exit_code, 1);
  const std::string big = Write(
      "big.json",
      R"({"n": 2, "m": 17, "valuations": [)"
      R"([1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1],)"
      R"([1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1]]})");
  EXPECT_EQ(Cli("oracle --instance " + big + " --agent 0").exit_code, 1);
  EXPECT_EQ(Cli("solve --instance " + big + " --alpha-mode oracle").exit_code,
            1);
  EXPECT_EQ(Cli("solve --instance " + big).exit_code, 0);
  EXPECT_EQ(Cli("fptas --instance " + big + " --epsilon 3/4").exit_code, 1);
  EXPECT_EQ(Cli("bogus").exit_code, 1);
  EXPECT_EQ(Cli("").exit_code, 1);
}

}  // namespace
}  // namespace mmsalloc
