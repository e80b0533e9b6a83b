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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "sif/ir.h"

namespace sif {

namespace {

constexpr std::pair<BinOpKind, std::string_view> kBinOps[] = {
    {BinOpKind::kAdd, "add"}, {BinOpKind::kSub, "sub"},
    {BinOpKind::kMul, "mul"}, {BinOpKind::kDiv, "div"},
    {BinOpKind::kConcat, "concat"}, {BinOpKind::kEq, "eq"},
    {BinOpKind::kLt, "lt"}, {BinOpKind::kGt, "gt"},
    {BinOpKind::kAnd, "and"}, {BinOpKind::kOr, "or"},
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string join_strings(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out;
}

std::string operands_to_string(const std::vector<LabelOperand>& ops) {
  std::vector<std::string> parts;
  for (const auto& o : ops) parts.push_back(to_string(o));
  return join_strings(parts);
}

}  // namespace

std::string_view to_string(BinOpKind op) {
  for (const auto& [k, name] : kBinOps) {
    if (k == op) return name;
  }
  return "?";
}

std::optional<BinOpKind> binop_from_string(std::string_view name) {
  for (const auto& [k, n] : kBinOps) {
    if (n == name) return k;
  }
  return std::nullopt;
}

bool is_monitor(const Instruction& inst) {
  return std::holds_alternative<JoinInst>(inst) ||
         std::holds_alternative<LoadSlotInst>(inst) ||
         std::holds_alternative<StoreSlotInst>(inst) ||
         std::holds_alternative<AssertFlowInst>(inst) ||
         std::holds_alternative<SetPcInst>(inst) ||
         std::holds_alternative<SavePcInst>(inst) ||
         std::holds_alternative<PhiLabelInst>(inst) ||
         std::holds_alternative<InstantiateInst>(inst) ||
         std::holds_alternative<LeakHaltInst>(inst);
}

bool is_primitive_type(std::string_view type) {
  return type == "int" || type == "long" || type == "double" ||
         type == "string" || type == "bool" || type == kLabelType;
}

const FieldDef* ClassDef::find_field(std::string_view n) const {
  for (const auto& f : fields) {
    if (f.name == n) return &f;
  }
  return nullptr;
}

const MethodDef* ClassDef::find_method(std::string_view n) const {
  for (const auto& m : methods) {
    if (m.name == n) return &m;
  }
  return nullptr;
}

const ClassDef* Program::find_class(std::string_view name) const {
  for (const auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

ClassDef* Program::find_class(std::string_view name) {
  for (auto& c : classes) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::vector<const ClassDef*> class_chain(const Program& p,
                                         std::string_view class_name) {
  std::vector<const ClassDef*> chain;
  std::set<std::string> seen;
  const ClassDef* c = p.find_class(class_name);
  while (c && seen.insert(c->name).second) {
    chain.push_back(c);
    c = c->superclass ? p.find_class(*c->superclass) : nullptr;
  }
  return chain;
}

bool is_subclass_of(const Program& p, std::string_view sub,
                    std::string_view super) {
  for (const ClassDef* c : class_chain(p, sub)) {
    if (c->name == super) return true;
  }
  return false;
}

std::optional<FieldLookup> lookup_field(const Program& p,
                                        std::string_view class_name,
                                        std::string_view field) {
  for (const ClassDef* c : class_chain(p, class_name)) {
    if (const FieldDef* f = c->find_field(field)) return FieldLookup{c, f};
  }
  return std::nullopt;
}

std::optional<MethodLookup> lookup_method(const Program& p,
                                          std::string_view class_name,
                                          std::string_view method) {
  for (const ClassDef* c : class_chain(p, class_name)) {
    if (const MethodDef* m = c->find_method(method)) return MethodLookup{c, m};
  }
  return std::nullopt;
}

std::vector<FieldDef> all_fields(const Program& p,
                                 std::string_view class_name) {
  auto chain = class_chain(p, class_name);
  std::vector<FieldDef> out;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    out.insert(out.end(), (*it)->fields.begin(), (*it)->fields.end());
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(const Literal& lit) {
  return std::visit(
      Overloaded{
          [](const Null&) -> std::string { return "null"; },
          [](int64_t v) -> std::string { return std::to_string(v); },
          [](double v) -> std::string {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            std::string s = buf;
            if (std::isfinite(v) &&
                s.find_first_of(".e") == std::string::npos) {
              s += ".0";
            }
            return s;
          },
          [](bool v) -> std::string { return v ? "true" : "false"; },
          [](const std::string& s) -> std::string { return quote(s); },
      },
      lit);
}

std::string to_string(const Operand& op) {
  if (const Var* v = std::get_if<Var>(&op)) return v->name;
  return to_string(std::get<Literal>(op));
}

std::string to_string(const LabelOperand& op) {
  return std::visit(
      Overloaded{
          [](const LabelVar& v) -> std::string { return v.name; },
          [](const PcRef&) -> std::string { return "pc"; },
          [](const Label& l) -> std::string { return to_string(l); },
      },
      op);
}

std::string to_string(const Instruction& inst) {
  return std::visit(
      Overloaded{
          [](const ConstInst& i) {
            return i.dst + " = " + to_string(i.value);
          },
          [](const CopyInst& i) { return i.dst + " = " + i.src; },
          [](const LoadFieldInst& i) {
            return i.dst + " = " + i.object + "." + i.field;
          },
          [](const StoreFieldInst& i) {
            return i.object + "." + i.field + " = " + to_string(i.value);
          },
          [](const NewInst& i) { return i.dst + " = new " + i.class_name; },
          [](const CallInst& i) {
            std::vector<std::string> args;
            for (const auto& a : i.args) args.push_back(to_string(a));
            return i.dst + " = call " + i.object + "." + i.method + "(" +
                   join_strings(args) + ")";
          },
          [](const BinOpInst& i) {
            return i.dst + " = " + std::string(to_string(i.op)) + " " +
                   to_string(i.lhs) + ", " + to_string(i.rhs);
          },
          [](const PhiInst& i) {
            std::vector<std::string> parts;
            for (const auto& [b, v] : i.incoming) {
              parts.push_back(b + ": " + to_string(v));
            }
            return i.dst + " = phi [" + join_strings(parts) + "]";
          },
          [](const JoinInst& i) {
            return i.dst + " = join(" + operands_to_string(i.operands) + ")";
          },
          [](const LoadSlotInst& i) {
            return i.dst + " = " + i.object + "." + i.slot;
          },
          [](const StoreSlotInst& i) {
            return i.object + "." + i.slot + " = " + to_string(i.value);
          },
          [](const AssertFlowInst& i) {
            return "assert_flow(" + to_string(i.value) + " <= " +
                   to_string(i.bound) + ", " + quote(i.reason) + ")";
          },
          [](const SetPcInst& i) {
            return "set_pc(" + operands_to_string(i.operands) + ")";
          },
          [](const SavePcInst& i) { return i.dst + " = save_pc"; },
          [](const PhiLabelInst& i) {
            std::vector<std::string> parts;
            for (const auto& [b, v] : i.incoming) {
              parts.push_back(b + ": " + to_string(v));
            }
            return (i.dst ? *i.dst : std::string("pc")) + " = phi_label [" +
                   join_strings(parts) + "]";
          },
          [](const InstantiateInst& i) {
            if (const auto* lt = std::get_if<LocalsTemplate>(&i.source)) {
              return i.dst + " = instantiate " + to_string(lt->tmpl);
            }
            const auto& ft = std::get<FieldTemplate>(i.source);
            return i.dst + " = instantiate " +
                   (ft.mode == FieldTemplateMode::kBound ? "bound "
                                                         : "taint ") +
                   ft.object + "." + ft.field;
          },
          [](const LeakHaltInst& i) { return "leak " + quote(i.reason); },
      },
      inst);
}

std::string to_string(const Terminator& term) {
  return std::visit(
      Overloaded{
          [](const BranchInst& t) {
            return "if " + t.cond + " goto " + t.target;
          },
          [](const GotoInst& t) { return "goto " + t.target; },
          [](const ReturnInst& t) { return "return " + to_string(t.value); },
      },
      term);
}

std::string print_program(const Program& p) {
  std::string out;
  if (p.instrumented) out += "@instrumented\n";
  for (const auto& a : p.annotations) {
    out += "@annotation " + a.class_name + "." + a.field + " " +
           to_string(a.tmpl) + "\n";
  }
  if (p.entry) out += "entry " + *p.entry + "\n";
  for (const auto& c : p.classes) {
    if (!out.empty()) out += "\n";
    if (!c.instrumented) out += "library ";
    out += "class " + c.name;
    if (c.superclass) out += " extends " + *c.superclass;
    out += " {\n";
    for (const auto& f : c.fields) out += "  " + f.type + " " + f.name + ";\n";
    for (const auto& m : c.methods) {
      std::vector<std::string> params;
      for (const auto& prm : m.params) params.push_back(prm.type + " " + prm.name);
      out += "  " + m.return_type + " " + m.name + "(" + join_strings(params) +
             ")";
      if (m.is_native()) {
        out += ";\n";
        continue;
      }
      out += " {\n";
      for (const auto& b : m.blocks) {
        out += "  " + b.label + ":\n";
        for (const auto& inst : b.body) out += "    " + to_string(inst) + "\n";
        out += "    " + to_string(b.terminator) + "\n";
      }
      out += "  }\n";
    }
    out += "}\n";
  }
  return out;
}

}  // namespace sif
