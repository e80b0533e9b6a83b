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

// SIF-IR: a small class-based SSA language.
//
//   library class Text {
//     string ofLong(long x);
//   }
//   class Example {
//     long field0;
//     long methodA(long a, long b) {
//     entry:
//       c = gt a, b
//       if c goto LABEL0
//     other:
//       ...
//     }
//   }
//
// A method body is a list of labelled basic blocks. `if c goto L` falls
// through to the next block. Instrumented programs additionally contain
// shadow slots (fields of type `label`) and monitor instructions that only
// the instrumented runtime executes.

#ifndef SIF_IR_H_
#define SIF_IR_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sif/lattice.h"

namespace sif {

struct Null {
  friend bool operator==(const Null&, const Null&) = default;
};

using Literal = std::variant<Null, int64_t, double, bool, std::string>;

struct Var {
  std::string name;
  friend bool operator==(const Var&, const Var&) = default;
};

// A local variable or a literal.
using Operand = std::variant<Var, Literal>;

enum class BinOpKind { kAdd, kSub, kMul, kDiv, kConcat, kEq, kLt, kGt, kAnd, kOr };

std::string_view to_string(BinOpKind op);
std::optional<BinOpKind> binop_from_string(std::string_view name);

// --- base instructions -----------------------------------------------------

struct ConstInst {
  std::string dst;
  Literal value;
  friend bool operator==(const ConstInst&, const ConstInst&) = default;
};
struct CopyInst {
  std::string dst;
  std::string src;
  friend bool operator==(const CopyInst&, const CopyInst&) = default;
};
struct LoadFieldInst {
  std::string dst;
  std::string object;
  std::string field;
  friend bool operator==(const LoadFieldInst&, const LoadFieldInst&) = default;
};
struct StoreFieldInst {
  std::string object;
  std::string field;
  Operand value;
  friend bool operator==(const StoreFieldInst&,
                         const StoreFieldInst&) = default;
};
struct NewInst {
  std::string dst;
  std::string class_name;
  friend bool operator==(const NewInst&, const NewInst&) = default;
};
struct CallInst {
  std::string dst;
  std::string object;
  std::string method;
  std::vector<Operand> args;
  friend bool operator==(const CallInst&, const CallInst&) = default;
};
struct BinOpInst {
  std::string dst;
  BinOpKind op = BinOpKind::kAdd;
  Operand lhs;
  Operand rhs;
  friend bool operator==(const BinOpInst&, const BinOpInst&) = default;
};
struct PhiInst {
  std::string dst;
  std::vector<std::pair<std::string, Operand>> incoming;  // (pred block, value)
  friend bool operator==(const PhiInst&, const PhiInst&) = default;
};

// --- monitor instructions --------------------------------------------------

struct PcRef {
  friend bool operator==(const PcRef&, const PcRef&) = default;
};
struct LabelVar {
  std::string name;
  friend bool operator==(const LabelVar&, const LabelVar&) = default;
};
using LabelOperand = std::variant<LabelVar, PcRef, Label>;

// dst = join(operands...)
struct JoinInst {
  std::string dst;
  std::vector<LabelOperand> operands;
  friend bool operator==(const JoinInst&, const JoinInst&) = default;
};
// dst = object.slot
struct LoadSlotInst {
  std::string dst;
  std::string object;
  std::string slot;
  friend bool operator==(const LoadSlotInst&, const LoadSlotInst&) = default;
};
// object.slot = value
struct StoreSlotInst {
  std::string object;
  std::string slot;
  LabelOperand value;
  friend bool operator==(const StoreSlotInst&, const StoreSlotInst&) = default;
};
// Halts with a leak unless value <= bound.
struct AssertFlowInst {
  LabelOperand value;
  LabelOperand bound;
  std::string reason;
  friend bool operator==(const AssertFlowInst&,
                         const AssertFlowInst&) = default;
};
// pc = join(operands...)
struct SetPcInst {
  std::vector<LabelOperand> operands;
  friend bool operator==(const SetPcInst&, const SetPcInst&) = default;
};
// dst = pc
struct SavePcInst {
  std::string dst;
  friend bool operator==(const SavePcInst&, const SavePcInst&) = default;
};
// dst (or pc when empty) = label of the incoming edge actually taken.
struct PhiLabelInst {
  std::optional<std::string> dst;
  std::vector<std::pair<std::string, LabelOperand>> incoming;
  friend bool operator==(const PhiLabelInst&, const PhiLabelInst&) = default;
};

// Template whose field paths name local variables (method parameters).
struct LocalsTemplate {
  LabelTemplate tmpl;
  friend bool operator==(const LocalsTemplate&,
                         const LocalsTemplate&) = default;
};

enum class FieldTemplateMode {
  kBound,  // store check; Secret when the field is unannotated
  kTaint,  // read label; the shadow slot when the field is unannotated
};

// The annotation of `object.field`, looked up on the object's dynamic class
// and instantiated against the object's current field values.
struct FieldTemplate {
  std::string object;
  std::string field;
  FieldTemplateMode mode = FieldTemplateMode::kTaint;
  friend bool operator==(const FieldTemplate&, const FieldTemplate&) = default;
};

struct InstantiateInst {
  std::string dst;
  std::variant<LocalsTemplate, FieldTemplate> source;
  friend bool operator==(const InstantiateInst&,
                         const InstantiateInst&) = default;
};
struct LeakHaltInst {
  std::string reason;
  friend bool operator==(const LeakHaltInst&, const LeakHaltInst&) = default;
};

using Instruction =
    std::variant<ConstInst, CopyInst, LoadFieldInst, StoreFieldInst, NewInst,
                 CallInst, BinOpInst, PhiInst, JoinInst, LoadSlotInst,
                 StoreSlotInst, AssertFlowInst, SetPcInst, SavePcInst,
                 PhiLabelInst, InstantiateInst, LeakHaltInst>;

bool is_monitor(const Instruction& inst);

// --- terminators -----------------------------------------------------------

struct BranchInst {
  std::string cond;
  std::string target;  // taken when cond is true; otherwise fall through
  friend bool operator==(const BranchInst&, const BranchInst&) = default;
};
struct GotoInst {
  std::string target;
  friend bool operator==(const GotoInst&, const GotoInst&) = default;
};
struct ReturnInst {
  Operand value;
  friend bool operator==(const ReturnInst&, const ReturnInst&) = default;
};

using Terminator = std::variant<BranchInst, GotoInst, ReturnInst>;

// --- declarations ----------------------------------------------------------

struct BasicBlock {
  std::string label;
  std::vector<Instruction> body;
  Terminator terminator;
  friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

struct Param {
  std::string type;
  std::string name;
  friend bool operator==(const Param&, const Param&) = default;
};

struct MethodDef {
  std::string name;
  std::vector<Param> params;
  std::string return_type;
  std::vector<BasicBlock> blocks;  // empty: native library method

  bool is_native() const { return blocks.empty(); }
  friend bool operator==(const MethodDef&, const MethodDef&) = default;
};

struct FieldDef {
  std::string type;
  std::string name;
  friend bool operator==(const FieldDef&, const FieldDef&) = default;
};

struct ClassDef {
  std::string name;
  std::optional<std::string> superclass;
  std::vector<FieldDef> fields;
  std::vector<MethodDef> methods;
  bool instrumented = true;  // false for `library class`

  const FieldDef* find_field(std::string_view n) const;
  const MethodDef* find_method(std::string_view n) const;
  friend bool operator==(const ClassDef&, const ClassDef&) = default;
};

// Field annotation carried by instrumented programs for the runtime.
struct AnnotationMeta {
  std::string class_name;
  std::string field;
  LabelTemplate tmpl;
  friend bool operator==(const AnnotationMeta&,
                         const AnnotationMeta&) = default;
};

struct Program {
  std::vector<ClassDef> classes;
  std::optional<std::string> entry;  // "Class.method"
  bool instrumented = false;
  std::vector<AnnotationMeta> annotations;

  const ClassDef* find_class(std::string_view name) const;
  ClassDef* find_class(std::string_view name);
  friend bool operator==(const Program&, const Program&) = default;
};

inline constexpr std::string_view kLabelType = "label";
inline constexpr std::string_view kShadowPrefix = "secLbl$";

bool is_primitive_type(std::string_view type);

// Walks the superclass chain starting at `class_name` (inclusive).
std::vector<const ClassDef*> class_chain(const Program& p,
                                         std::string_view class_name);
bool is_subclass_of(const Program& p, std::string_view sub,
                    std::string_view super);

struct FieldLookup {
  const ClassDef* owner = nullptr;
  const FieldDef* field = nullptr;
};
struct MethodLookup {
  const ClassDef* owner = nullptr;
  const MethodDef* method = nullptr;
};
std::optional<FieldLookup> lookup_field(const Program& p,
                                        std::string_view class_name,
                                        std::string_view field);
std::optional<MethodLookup> lookup_method(const Program& p,
                                          std::string_view class_name,
                                          std::string_view method);
// Declared plus inherited fields, root class first.
std::vector<FieldDef> all_fields(const Program& p, std::string_view class_name);

// Parses and verifies a program; throws ParseError or ValidationError.
Program parse_program(std::string_view text);
// Parses without semantic verification.
Program parse_program_syntax(std::string_view text);
std::string print_program(const Program& p);

// Structural and SSA checks; throws ValidationError.
void verify_program(const Program& p);

// Static type of every local of a method ("null" for the null literal).
using TypeMap = std::map<std::string, std::string>;
TypeMap infer_types(const Program& p, const ClassDef& cls,
                    const MethodDef& m);

std::string to_string(const Literal& lit);
std::string to_string(const Operand& op);
std::string to_string(const LabelOperand& op);
std::string to_string(const Instruction& inst);
std::string to_string(const Terminator& term);

}  // namespace sif

#endif  // SIF_IR_H_
