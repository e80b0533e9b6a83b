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

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sif/cli.h"

int main(int argc, char** argv) {
  CLI::App app{"Dynamic information-flow control toolkit"};
  app.require_subcommand(1);
  sif::CliConfig cfg;

  auto add_ir = [&](CLI::App* s) {
    s->add_option("--ir", cfg.ir, "SIF-IR program")->required();
  };
  auto add_lattice = [&](CLI::App* s) {
    s->add_option("--lattice", cfg.lattice, "Lattice file")->required();
  };
  auto add_specs = [&](CLI::App* s) {
    s->add_option("--specs", cfg.specs, "Security specification file(s)")
        ->required();
  };
  auto add_verbose = [&](CLI::App* s) {
    s->add_flag("-v,--verbose", cfg.verbosity, "More diagnostics");
  };

  CLI::App* inst = app.add_subcommand("instrument", "Inline the reference monitor");
  add_ir(inst);
  add_specs(inst);
  add_lattice(inst);
  inst->add_option("-o,--output", cfg.output, "Instrumented IR (default stdout)");
  inst->add_option("--manifest", cfg.manifest, "Shadow-slot manifest output");
  add_verbose(inst);

  CLI::App* runc = app.add_subcommand("run", "Run one case on a program");
  add_ir(runc);
  add_lattice(runc);
  runc->add_option("--case", cfg.cases, "File holding one case")->required();
  runc->add_option("--max-stack", cfg.max_stack, "Frame limit")
      ->check(CLI::PositiveNumber);
  add_verbose(runc);

  CLI::App* check = app.add_subcommand("check", "Instrument and run a case suite");
  add_ir(check);
  add_specs(check);
  add_lattice(check);
  check->add_option("--cases", cfg.cases, "Case file")->required();
  check->add_option("--max-stack", cfg.max_stack, "Frame limit")
      ->check(CLI::PositiveNumber);
  add_verbose(check);

  CLI::App* bench = app.add_subcommand("bench", "Measure monitor overhead");
  add_ir(bench);
  add_specs(bench);
  add_lattice(bench);
  bench->add_option("--cases", cfg.cases, "Case file")->required();
  bench->add_option("--reps", cfg.repetitions, "Repetitions per case")
      ->check(CLI::PositiveNumber);
  add_verbose(bench);

  CLI::App* lat = app.add_subcommand("lattice-check", "Verify lattice laws");
  add_lattice(lat);
  add_verbose(lat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? sif::kExitOk : sif::kExitUsage;
  }

  if (inst->parsed()) return sif::cmd_instrument(cfg, std::cout, std::cerr);
  if (runc->parsed()) return sif::cmd_run(cfg, std::cout, std::cerr);
  if (check->parsed()) return sif::cmd_check(cfg, std::cout, std::cerr);
  if (bench->parsed()) return sif::cmd_bench(cfg, std::cout, std::cerr);
  return sif::cmd_lattice_check(cfg, std::cout, std::cerr);
}
