/*
 * Copyright 2026 The SIF Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "sif/cli.h"
#include "sif/ir.h"
#include "test_support.h"

namespace sif {
namespace {

namespace fs = std::filesystem;
using testing::corpus_path;
using testing::read_file;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sif_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  CliConfig corpus_config() {
    CliConfig c;
    c.ir = corpus_path("employees.sif");
    c.specs = {corpus_path("employees.spec")};
    c.lattice = corpus_path("employees.lat");
    c.cases = corpus_path("employees.cases");
    return c;
  }

  std::ostringstream out_, err_;
  fs::path dir_;
};

TEST_F(CliTest, InstrumentWritesProgramAndManifest) {
  CliConfig c = corpus_config();
  c.output = path("out.sif");
  c.manifest = path("out.manifest");
  ASSERT_EQ(cmd_instrument(c, out_, err_), kExitOk) << err_.str();
  Program p = parse_program(read_file(c.output));
  EXPECT_TRUE(p.instrumented);
  EXPECT_NE(read_file(c.manifest).find("Employee\tobject\t-\tsecLbl$this\n"),
            std::string::npos);
}

TEST_F(CliTest, InstrumentUsageAndParseErrors) {
  CliConfig c = corpus_config();
  c.lattice.clear();
  EXPECT_EQ(cmd_instrument(c, out_, err_), kExitUsage);
  c = corpus_config();
  c.specs = {write("bad.spec", "class Employee {\n  long:Public\n}\n")};
  EXPECT_EQ(cmd_instrument(c, out_, err_), kExitError);
  EXPECT_NE(err_.str().find("bad.spec:3:"), std::string::npos) << err_.str();
  c = corpus_config();
  c.ir = path("missing.sif");
  EXPECT_EQ(cmd_instrument(c, out_, err_), kExitError);
}

TEST_F(CliTest, RunExitCodes) {
  CliConfig inst = corpus_config();
  inst.output = path("inst.sif");
  ASSERT_EQ(cmd_instrument(inst, out_, err_), kExitOk);
  CliConfig c;
  c.ir = inst.output;
  c.lattice = corpus_path("employees.lat");
  c.cases = write("ok.case", "case ok: call App.associateDispatch(1, 1) expect normal\n");
  EXPECT_EQ(cmd_run(c, out_, err_), kExitOk);
  EXPECT_EQ(out_.str().rfind("normal\t", 0), 0u);
  c.cases = write("leak.case", "case no: call App.salaryDispatch(1, 2) expect leak\n");
  out_.str("");
  EXPECT_EQ(cmd_run(c, out_, err_), kExitLeak);
  EXPECT_NE(out_.str().find("AssociateSL(2)"), std::string::npos);
  c.ir = write("broken.sif",
               "class C {\n  long f() {\n  entry:\n    x = and 1, true\n"
               "    return x\n  }\n}\n");
  c.cases = write("broken.case", "case b: call C.f() expect normal\n");
  EXPECT_EQ(cmd_run(c, out_, err_), kExitError);
  c.cases = corpus_path("employees.cases");
  EXPECT_EQ(cmd_run(c, out_, err_), kExitUsage);
}

TEST_F(CliTest, CheckCorpusAndSeededMismatch) {
  CliConfig c = corpus_config();
  ASSERT_EQ(cmd_check(c, out_, err_), kExitOk) << out_.str() << err_.str();
  std::string first = out_.str();
  std::ostringstream again;
  ASSERT_EQ(cmd_check(c, again, err_), kExitOk);
  EXPECT_EQ(first, again.str());

  Program seeded = testing::apply_overrides(
      parse_program(read_file(corpus_path("employees.sif"))),
      parse_program_syntax(read_file(corpus_path("leaks/unguarded_salary.sif"))));
  c.ir = write("seeded.sif", print_program(seeded));
  c.cases = write("seeded.cases",
                  "case seeded: call App.associateDispatch(1, 2) expect normal\n");
  out_.str("");
  EXPECT_EQ(cmd_check(c, out_, err_), kExitError);
  EXPECT_NE(out_.str().find("seeded\tnormal\tleak\tFAIL"), std::string::npos);

  c = corpus_config();
  c.cases = write("empty.cases", "# nothing\n");
  out_.str("");
  EXPECT_EQ(cmd_check(c, out_, err_), kExitOk);
  EXPECT_NE(out_.str().find("summary\tpassed=0\tfailed=0\ttotal=0"),
            std::string::npos);
}

TEST_F(CliTest, Bench) {
  CliConfig c = corpus_config();
  c.cases = corpus_path("employees.bench");
  c.repetitions = 1;
  ASSERT_EQ(cmd_bench(c, out_, err_), kExitOk) << err_.str();
  std::istringstream lines(out_.str());
  std::string line;
  size_t n = 0;
  while (std::getline(lines, line)) ++n;
  EXPECT_EQ(n, 1u + 5u + 2u);  // header, rows, geomean, total
  c.cases = write("none.cases", "");
  EXPECT_EQ(cmd_bench(c, out_, err_), kExitUsage);
}

TEST_F(CliTest, LatticeCheck) {
  CliConfig c;
  c.lattice = corpus_path("employees.lat");
  EXPECT_EQ(cmd_lattice_check(c, out_, err_), kExitOk);
  c.lattice = write("two.lat", "label A\nlabel B\n");
  EXPECT_EQ(cmd_lattice_check(c, out_, err_), kExitOk) << err_.str();
  c.lattice = write("cycle.lat", "label A\nlabel B\norder A < B\norder B < A\n");
  EXPECT_EQ(cmd_lattice_check(c, out_, err_), kExitError);
  c.lattice.clear();
  EXPECT_EQ(cmd_lattice_check(c, out_, err_), kExitUsage);
}

int run_binary(const std::string& args) {
  std::string cmd = std::string(SIF_BINARY) + " " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliBinary, ExitCodes) {
  std::string common = "--ir " + corpus_path("employees.sif") + " --specs " +
                       corpus_path("employees.spec") + " --lattice " +
                       corpus_path("employees.lat");
  EXPECT_EQ(run_binary("check " + common + " --cases " +
                       corpus_path("employees.cases")),
            0);
  EXPECT_EQ(run_binary("check " + common), 2);
  EXPECT_EQ(run_binary("frobnicate"), 2);
  EXPECT_EQ(run_binary(""), 2);
  EXPECT_EQ(run_binary("lattice-check --lattice " + corpus_path("employees.lat")),
            0);
  EXPECT_EQ(run_binary("bench " + common + " --cases " +
                       corpus_path("employees.bench") + " --reps 0"),
            2);
  EXPECT_EQ(run_binary("--help"), 0);
}

}  // namespace
}  // namespace sif
