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

// Subcommands of the `sif` tool, callable without a process boundary.

#ifndef SIF_CLI_H_
#define SIF_CLI_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace sif {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitUsage = 2,
  kExitLeak = 3,
};

struct CliConfig {
  std::string ir;
  std::vector<std::string> specs;
  std::string lattice;
  std::string cases;
  std::string output;    // instrumented IR; standard output when empty
  std::string manifest;  // shadow layout; not written when empty
  size_t max_stack = 1024;
  size_t repetitions = 200;
  int verbosity = 0;
};

int cmd_instrument(const CliConfig& c, std::ostream& out, std::ostream& err);
int cmd_run(const CliConfig& c, std::ostream& out, std::ostream& err);
int cmd_check(const CliConfig& c, std::ostream& out, std::ostream& err);
int cmd_bench(const CliConfig& c, std::ostream& out, std::ostream& err);
int cmd_lattice_check(const CliConfig& c, std::ostream& out, std::ostream& err);

}  // namespace sif

#endif  // SIF_CLI_H_
