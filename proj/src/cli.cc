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

#include "sif/cli.h"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "sif/instrument.h"
#include "sif/ir.h"
#include "sif/lattice.h"
#include "sif/runtime.h"
#include "sif/specs.h"
#include "sif/suite.h"

namespace sif {

namespace {

// Raised for missing inputs; maps to kExitUsage.
struct UsageError : Error {
  using Error::Error;
};

std::string read_input(const std::string& path, const char* what) {
  if (path.empty()) throw UsageError(std::string("missing --") + what);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + std::string(what) + " file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses a file, prefixing diagnostics with its path.
template <typename F>
auto parse_file(const std::string& path, const char* what, F parse) {
  std::string text = read_input(path, what);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw Error(path + ":" + to_string(e.location()) + ": " + e.bare_message());
  } catch (const ValidationError& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text,
                  std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
  if (!out.flush()) throw Error("cannot write '" + path + "'");
}

struct Pipeline {
  Program original;
  LatticeDef lattice;
  InstrumentResult instrumented;
};

Pipeline build_pipeline(const CliConfig& c) {
  if (c.specs.empty()) throw UsageError("missing --specs");
  if (c.lattice.empty()) throw UsageError("missing --lattice");
  Program p = parse_file(c.ir, "ir", [](const std::string& t) {
    return parse_program(t);
  });
  LatticeDef lat = parse_file(c.lattice, "lattice", [](const std::string& t) {
    return parse_lattice(t);
  });
  std::vector<ClassSpec> specs;
  for (const std::string& path : c.specs) {
    auto more = parse_file(path, "specs", [](const std::string& t) {
      return parse_specs(t);
    });
    specs.insert(specs.end(), more.begin(), more.end());
  }
  ResolvedSpecs resolved = [&] {
    try {
      return resolve_specs(specs, p, lat);
    } catch (const ValidationError& e) {
      throw Error(std::string("specification: ") + e.what());
    }
  }();
  InstrumentResult r = instrument_program(p, resolved);
  return {std::move(p), std::move(lat), std::move(r)};
}

std::vector<TestCase> load_cases(const CliConfig& c) {
  return parse_file(c.cases, "cases", [](const std::string& t) {
    return parse_cases(t);
  });
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    err << "sif: usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "sif: error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace

int cmd_instrument(const CliConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Pipeline pl = build_pipeline(c);
    write_output(c.output, print_program(pl.instrumented.program), out);
    if (!c.manifest.empty()) {
      write_output(c.manifest, pl.instrumented.manifest, out);
    }
    if (c.verbosity > 0) {
      err << "sif: instrumented " << pl.original.classes.size()
          << " classes\n";
    }
    return kExitOk;
  });
}

int cmd_run(const CliConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (c.lattice.empty()) throw UsageError("missing --lattice");
    if (c.cases.empty()) throw UsageError("missing --case");
    Program p = parse_file(c.ir, "ir", [](const std::string& t) {
      return parse_program(t);
    });
    LatticeDef lat = parse_file(c.lattice, "lattice", [](const std::string& t) {
      return parse_lattice(t);
    });
    std::vector<TestCase> cases = load_cases(c);
    if (cases.size() != 1) {
      throw UsageError("--case file must hold exactly one case, found " +
                       std::to_string(cases.size()));
    }
    const TestCase& tc = cases.front();
    RunOptions opts;
    opts.max_stack = c.max_stack;
    RunOutcome o = run(p, lat, tc.entry, entry_args(tc), tc.pc, opts);
    if (o.is_leak()) {
      out << "leak\t" << to_string(*o.leak) << '\n';
      return kExitLeak;
    }
    out << "normal\t" << to_string(o.value) << '\t' << to_string(o.label)
        << '\n';
    return kExitOk;
  });
}

int cmd_check(const CliConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Pipeline pl = build_pipeline(c);
    std::vector<TestCase> cases = load_cases(c);
    RunOptions opts;
    opts.max_stack = c.max_stack;
    SuiteReport r = run_suite(pl.instrumented.program, pl.lattice, cases, opts);
    out << format_report(r);
    if (r.failed > 0) {
      err << "sif: " << r.failed << " of " << r.rows.size()
          << " cases did not match their expectation\n";
      return kExitError;
    }
    return kExitOk;
  });
}

int cmd_bench(const CliConfig& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (c.repetitions == 0) throw UsageError("--reps must be positive");
    Pipeline pl = build_pipeline(c);
    std::vector<TestCase> cases = load_cases(c);
    if (cases.empty()) throw UsageError("bench needs at least one case");
    OverheadReport r = measure_overhead(pl.original, pl.instrumented.program,
                                        pl.lattice, cases, c.repetitions);
    out << format_overhead(r);
    return kExitOk;
  });
}

int cmd_lattice_check(const CliConfig& c, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    LatticeDef lat = parse_file(c.lattice, "lattice", [](const std::string& t) {
      return parse_lattice(t);
    });
    std::vector<Label> universe = sample_universe(lat, {1, 2});
    if (auto bad = check_lattice_laws(lat, universe)) {
      err << "sif: lattice law violated: " << *bad << '\n';
      return kExitError;
    }
    out << "ok\tlabels=" << universe.size() << '\n';
    return kExitOk;
  });
}

}  // namespace sif
