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

// Test-case files, suite verdicts and overhead measurement.
//
// Case syntax, one per line:
//   case NAME: call Class.method(args...) [labels(l0, ...)] [pc(l)]
//       expect normal|leak [ref(x)]
// Omitted labels and pc default to Public. ref(x) carries an external
// reference overhead factor for bench output.

#ifndef SIF_SUITE_H_
#define SIF_SUITE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sif/ir.h"
#include "sif/lattice.h"
#include "sif/runtime.h"

namespace sif {

enum class Expectation { kNormal, kLeak };

struct TestCase {
  std::string name;
  std::string entry;  // Class.method
  std::vector<Literal> args;
  std::vector<Label> labels;  // same length as args
  Label pc;
  Expectation expect = Expectation::kNormal;
  std::optional<double> ref;
  Location loc;
};

std::vector<TestCase> parse_cases(std::string_view text);
std::string print_case(const TestCase& c);
std::vector<EntryArg> entry_args(const TestCase& c);

struct CaseVerdict {
  std::string name;
  Expectation expected = Expectation::kNormal;
  std::string actual;  // normal | leak | error
  bool passed = false;
  std::string detail;
  std::optional<RunOutcome> outcome;  // unset on run error
};

struct SuiteReport {
  std::vector<CaseVerdict> rows;
  size_t passed = 0;
  size_t failed = 0;
};

SuiteReport run_suite(const Program& p, const LatticeDef& lat,
                      const std::vector<TestCase>& cases,
                      const RunOptions& options = {});

// Tab-separated rows under the header `case expected actual verdict detail`,
// then `summary\tpassed=N\tfailed=N\ttotal=N`.
std::string format_report(const SuiteReport& r);

struct OverheadRow {
  std::string name;
  double original_ns = 0;      // mean per run
  double instrumented_ns = 0;  // mean per run
  double factor = 0;
  std::optional<double> ref;
};

struct OverheadReport {
  std::vector<OverheadRow> rows;
  double geomean = 0;
  double total_factor = 0;  // summed instrumented time over summed original
  std::optional<double> ref_geomean;
};

// Runs each case `repetitions` times on both programs, interleaved, after one
// warm-up each. Throws RunError if a case does not run normally on either.
OverheadReport measure_overhead(const Program& original,
                                const Program& instrumented,
                                const LatticeDef& lat,
                                const std::vector<TestCase>& cases,
                                size_t repetitions);

std::string format_overhead(const OverheadReport& r);

}  // namespace sif

#endif  // SIF_SUITE_H_
