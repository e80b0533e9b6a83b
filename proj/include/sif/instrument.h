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

// Rewrites a program into one that carries shadow labels and an in-lined
// reference monitor.

#ifndef SIF_INSTRUMENT_H_
#define SIF_INSTRUMENT_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sif/cfg.h"
#include "sif/ir.h"
#include "sif/lattice.h"
#include "sif/specs.h"

namespace sif {

// Slot names.
std::string object_slot_name();                        // secLbl$this
std::string field_slot_name(std::string_view field);   // secLbl$<f>
std::string param_slot_name(std::string_view method, size_t i);  // secLbl$<m>$p<i>
std::string ret_slot_name(std::string_view method);    // secLbl$<m>$ret
std::string pc_in_slot_name(std::string_view method);  // secLbl$<m>$pcIn

struct MethodSlots {
  std::vector<std::string> params;
  std::string ret;
  std::string pc_in;
};

struct ClassShadow {
  bool has_object_slot = false;
  std::vector<std::pair<std::string, std::string>> field_slots;  // field, slot
  std::vector<std::pair<std::string, MethodSlots>> method_slots;
};

struct ShadowLayout {
  // Instrumented classes only, keyed by class name.
  std::map<std::string, ClassShadow> classes;

  // Slot holding the label of `field` for objects of static class `cls`:
  // its own slot for primitive or library-typed fields, otherwise the
  // holder's object slot.
  std::string label_slot_for_field(const Program& p, std::string_view cls,
                                   std::string_view field) const;
};

// Whether `type` names a class whose objects carry shadow state.
bool is_instrumented_type(const Program& p, std::string_view type);

// Adds the shadow slots of every instrumented class. Throws ValidationError
// when a slot name collides with an existing member.
std::pair<Program, ShadowLayout> inject_shadow_fields(const Program& p);

// Deterministic text listing of a layout, one slot per line.
std::string print_manifest(const Program& p, const ShadowLayout& layout);

// How each block starts with respect to the pc.
struct BlockPcPlan {
  enum class Entry {
    kInherit,  // single predecessor, or the entry block
    kRestore,  // closes the scope opened by `opener`
    kMerge,    // plain merge: pc is the label of the edge taken
  };
  Entry entry = Entry::kInherit;
  std::optional<size_t> opener;
  bool saves_pc = false;  // ends in a branch
};

std::vector<BlockPcPlan> plan_pc(const Cfg& c);

// Everything the rewriter needs that is shared across methods.
struct InstrumentContext {
  const Program* original = nullptr;
  const ShadowLayout* layout = nullptr;
  const ResolvedSpecs* specs = nullptr;
};

MethodDef rewrite_method(const InstrumentContext& ctx, const ClassDef& cls,
                         const MethodDef& m);

struct InstrumentResult {
  Program program;
  ShadowLayout layout;
  std::string manifest;
};

// Injects slots, rewrites every method of every instrumented class and
// records the field annotations for the runtime. Throws ValidationError.
InstrumentResult instrument_program(const Program& p, const ResolvedSpecs& specs);

// Removes monitor instructions, shadow slots and instrumentation metadata.
Program erase_instrumentation(const Program& p);

// Static pc discipline of an instrumented program: each branch is directly
// preceded by a save/raise pair, each scope-closing block starts by
// restoring the matching saved pc, and saved-pc scopes nest. Returns the
// first problem found.
std::optional<std::string> check_pc_discipline(const Program& p);

}  // namespace sif

#endif  // SIF_INSTRUMENT_H_
