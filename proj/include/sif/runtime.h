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

// Interpreter for plain and instrumented SIF-IR programs.

#ifndef SIF_RUNTIME_H_
#define SIF_RUNTIME_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sif/ir.h"
#include "sif/lattice.h"

namespace sif {

struct ObjRef {
  uint64_t id = 0;
  friend bool operator==(const ObjRef&, const ObjRef&) = default;
};

using RuntimeValue =
    std::variant<Null, int64_t, double, bool, std::string, ObjRef>;

std::string to_string(const RuntimeValue& v);
RuntimeValue from_literal(const Literal& lit);

struct LeakReport {
  std::string method;  // Class.method
  std::string block;
  size_t instruction = 0;
  std::optional<Label> offending;
  std::optional<Label> bound;
  std::string reason;
};

std::string to_string(const LeakReport& r);

struct RunOutcome {
  enum class Kind { kNormal, kLeak };
  Kind kind = Kind::kNormal;
  RuntimeValue value;
  Label label;
  std::optional<LeakReport> leak;

  bool is_leak() const { return kind == Kind::kLeak; }
};

// One write to a shadow slot.
struct SlotUpdate {
  uint64_t object = 0;
  std::string class_name;
  std::string slot;
  Label label;
};

struct RunOptions {
  size_t max_stack = 1024;
  uint64_t max_steps = 50'000'000;
  std::vector<SlotUpdate>* slot_log = nullptr;  // appended to when set
};

struct EntryArg {
  RuntimeValue value;
  Label label;
};

// Runs `entry` ("Class.method") on a fresh instance of its class. For
// instrumented programs the arguments' labels and the entry pc are handed
// over through the method's shadow slots and the result label is read from
// its return slot; plain programs report Public.
//
// Leaks come back as an outcome. Malformed programs, type errors, division
// by zero, null dereferences and exhausted limits throw RunError.
RunOutcome run(const Program& p, const LatticeDef& lat, const std::string& entry,
               const std::vector<EntryArg>& args, const Label& entry_pc,
               const RunOptions& options = {});

}  // namespace sif

#endif  // SIF_RUNTIME_H_
