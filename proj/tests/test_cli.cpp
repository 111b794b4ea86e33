// Copyright 2026 The mdising Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdising/io.hpp"
#include "mdising/multidigit.hpp"
#include "mdising/serialize.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mdising_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) const {
    const std::string cmd = std::string(MDISING_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
  }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
    return (dir_ / name).string();
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string out_flag() const { return "--output-dir " + dir_.string(); }

  fs::path dir_;
};

std::string problem_text(std::uint64_t seed, std::size_t n) {
  std::ostringstream out;
  mdising::io::write_problem(out, oracle::random_problem(seed, n, false));
  return out.str();
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("map").code, 1);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("solve --program " + (dir_ / "missing.txt").string()).code, 1);
  const auto bad = write("bad.txt", "3\n0 1 x\n");
  const auto r = run("map --problem " + bad);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;
}

TEST_F(Cli, MapThreeDigitNineSpins) {
  const auto problem = write("p.txt", problem_text(1, 9));
  const auto r = run(out_flag() + " map --problem " + problem + " --digits 3 --q 5");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("spins: 54 of 59"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("effective range: [-124, 124]"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("validation: ok"), std::string::npos) << r.out;

  std::istringstream program_text(read("program.txt"));
  const auto program = mdising::io::read_program(program_text);
  EXPECT_EQ(program.size(), 54u);

  // plan.json matches an in-library compile of the same problem and
  // survives a parse/serialize round trip.
  std::istringstream problem_in(problem_text(1, 9));
  const auto p = mdising::normalize(mdising::io::read_problem(problem_in)).problem;
  const auto expected = mdising::map_three_digit(p, mdising::HardwareProfile::cobi(), {3, 5, {}});
  EXPECT_EQ(program, expected.program);
  const auto json = mdising::Json::parse(read("plan.json"));
  const auto plan = json.get<mdising::MappingPlan>();
  EXPECT_EQ(plan.groups, expected.plan.groups);
  EXPECT_EQ(plan.quantized, expected.plan.quantized);
  EXPECT_EQ(mdising::Json(plan), json);
}

TEST_F(Cli, MapReportsBudgetAndBadBase) {
  const auto problem = write("p.txt", problem_text(1, 9));
  const auto big = run(out_flag() + " map --problem " + problem + " --digits 3 --q 8");
  EXPECT_EQ(big.code, 2);
  EXPECT_NE(big.out.find("allows 59"), std::string::npos) << big.out;
  EXPECT_EQ(run(out_flag() + " map --problem " + problem + " --digits 2 --q 9").code, 2);
  const auto warn = run(out_flag() + " map --problem " + problem + " --digits 2 --q 8");
  EXPECT_EQ(warn.code, 0) << warn.out;
  EXPECT_NE(warn.out.find("warning:"), std::string::npos) << warn.out;
}

TEST_F(Cli, SolveIsSeededAndExactIsBounded) {
  const auto problem = write("p.txt", problem_text(2, 5));
  ASSERT_EQ(run(out_flag() + " map --problem " + problem + " --mapping native").code, 0);
  const auto program = (dir_ / "program.txt").string();
  const auto a = run("--seed 5 solve --program " + program + " --anneals 10 --sweeps 50");
  const auto b = run("--seed 5 solve --program " + program + " --anneals 10 --sweeps 50");
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  const auto exact = run("solve --exact --program " + program);
  ASSERT_EQ(exact.code, 0) << exact.out;
  const auto ja = mdising::Json::parse(a.out);
  const auto je = mdising::Json::parse(exact.out);
  EXPECT_EQ(ja["energy"], je["energy"]);

  std::ostringstream wide;
  mdising::io::write_program(wide, mdising::DeviceProgram(25));
  const auto r = run("solve --exact --program " + write("wide.txt", wide.str()));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("24"), std::string::npos) << r.out;
}

TEST_F(Cli, ValidateFlagsEveryProblem) {
  const auto ok = write("ok.txt", "spins 3\n0 1 7\n1 0 -7\n");
  const auto r_ok = run("validate --program " + ok);
  EXPECT_EQ(r_ok.code, 0) << r_ok.out;
  const auto bad = write("bad.txt", "spins 3\n0 1 8\n1 2 2.5\n2 2 1\n");
  const auto r = run("validate --program " + bad);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("3 violation(s)"), std::string::npos) << r.out;
  const auto profile = write("wide.profile", "c_max = 8\nmax_spins = 2\n");
  const auto r_profile = run("validate --profile " + profile + " --program " + ok);
  EXPECT_EQ(r_profile.code, 2) << r_profile.out;
}

TEST_F(Cli, MimoBerWritesArtifacts) {
  const auto spec = write("s.spec",
                          "n_t = 2\nn_r = 2\nconstellation = 16-QAM\ntrials = 3\nseed = 4\n"
                          "anneals = 4\nsweeps = 20\narm = native\narm = multidigit digits=3 q=8\n");
  const auto r = run(out_flag() + " mimo-ber --dump-instances --spec " + spec);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("BER n/a (3 budget failures)"), std::string::npos) << r.out;
  const auto csv = read("results.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  const auto summary = mdising::Json::parse(read("summary.json"));
  EXPECT_EQ(summary["trials"].get<int>(), 3);
  EXPECT_EQ(mdising::Json::parse(read("instances.json")).size(), 3u);

  const auto first = csv;
  ASSERT_EQ(run(out_flag() + " --jobs 2 mimo-ber --spec " + spec).code, 0);
  EXPECT_EQ(read("results.csv"), first);
  ASSERT_EQ(run(out_flag() + " --seed 9 mimo-ber --spec " + spec).code, 0);
  EXPECT_NE(read("results.csv"), first);
}

}  // namespace
