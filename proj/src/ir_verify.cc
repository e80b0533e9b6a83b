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
#include <set>

#include "sif/cfg.h"
#include "sif/ir.h"

namespace sif {

namespace {

bool is_shadow_name(std::string_view name) {
  return name.substr(0, kShadowPrefix.size()) == kShadowPrefix;
}

std::string literal_type(const Literal& lit) {
  switch (lit.index()) {
    case 0: return "null";
    case 1: return "long";
    case 2: return "double";
    case 3: return "bool";
    default: return "string";
  }
}

bool is_class_type(const Program& p, std::string_view type) {
  return !is_primitive_type(type) && p.find_class(type) != nullptr;
}

// Program variable defined by a base instruction, if any.
const std::string* base_def(const Instruction& inst) {
  return std::visit(
      [](const auto& i) -> const std::string* {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, ConstInst> ||
                      std::is_same_v<T, CopyInst> ||
                      std::is_same_v<T, LoadFieldInst> ||
                      std::is_same_v<T, NewInst> ||
                      std::is_same_v<T, CallInst> ||
                      std::is_same_v<T, BinOpInst> ||
                      std::is_same_v<T, PhiInst>) {
          return &i.dst;
        } else {
          return nullptr;
        }
      },
      inst);
}

// Label variable defined by a monitor instruction, if any.
const std::string* label_def(const Instruction& inst) {
  return std::visit(
      [](const auto& i) -> const std::string* {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, JoinInst> ||
                      std::is_same_v<T, LoadSlotInst> ||
                      std::is_same_v<T, SavePcInst> ||
                      std::is_same_v<T, InstantiateInst>) {
          return &i.dst;
        } else if constexpr (std::is_same_v<T, PhiLabelInst>) {
          return i.dst ? &*i.dst : nullptr;
        } else {
          return nullptr;
        }
      },
      inst);
}

void collect_label_uses(const LabelOperand& op, std::vector<std::string>& out) {
  if (const auto* v = std::get_if<LabelVar>(&op)) out.push_back(v->name);
}

void collect_operand(const Operand& op, std::vector<std::string>& out) {
  if (const auto* v = std::get_if<Var>(&op)) out.push_back(v->name);
}

// Non-phi uses of an instruction (program and label variables).
std::vector<std::string> uses_of(const Instruction& inst) {
  std::vector<std::string> out;
  std::visit(
      [&](const auto& i) {
        using T = std::decay_t<decltype(i)>;
        if constexpr (std::is_same_v<T, CopyInst>) {
          out.push_back(i.src);
        } else if constexpr (std::is_same_v<T, LoadFieldInst> ||
                             std::is_same_v<T, LoadSlotInst>) {
          out.push_back(i.object);
        } else if constexpr (std::is_same_v<T, StoreFieldInst>) {
          out.push_back(i.object);
          collect_operand(i.value, out);
        } else if constexpr (std::is_same_v<T, CallInst>) {
          out.push_back(i.object);
          for (const auto& a : i.args) collect_operand(a, out);
        } else if constexpr (std::is_same_v<T, BinOpInst>) {
          collect_operand(i.lhs, out);
          collect_operand(i.rhs, out);
        } else if constexpr (std::is_same_v<T, JoinInst>) {
          for (const auto& o : i.operands) collect_label_uses(o, out);
        } else if constexpr (std::is_same_v<T, StoreSlotInst>) {
          out.push_back(i.object);
          collect_label_uses(i.value, out);
        } else if constexpr (std::is_same_v<T, AssertFlowInst>) {
          collect_label_uses(i.value, out);
          collect_label_uses(i.bound, out);
        } else if constexpr (std::is_same_v<T, SetPcInst>) {
          for (const auto& o : i.operands) collect_label_uses(o, out);
        } else if constexpr (std::is_same_v<T, InstantiateInst>) {
          if (const auto* lt = std::get_if<LocalsTemplate>(&i.source)) {
            for (const auto& a : lt->tmpl.args) {
              if (const auto* path = std::get_if<FieldPath>(&a)) {
                out.push_back(path->front());
              }
            }
          } else {
            out.push_back(std::get<FieldTemplate>(i.source).object);
          }
        }
      },
      inst);
  return out;
}

std::vector<std::string> uses_of(const Terminator& t) {
  if (const auto* b = std::get_if<BranchInst>(&t)) return {b->cond};
  if (const auto* r = std::get_if<ReturnInst>(&t)) {
    std::vector<std::string> out;
    collect_operand(r->value, out);
    return out;
  }
  return {};
}

struct DefSite {
  size_t block;
  long index;  // -1 for parameters and `this`
};

class MethodVerifier {
 public:
  MethodVerifier(const Program& p, const ClassDef& cls, const MethodDef& m)
      : p_(p), cls_(cls), m_(m) {}

  void run() {
    check_signature();
    if (m_.is_native()) return;
    std::set<std::string> labels;
    for (const auto& b : m_.blocks) {
      if (!labels.insert(b.label).second) fail("duplicate block label '" + b.label + "'");
    }
    cfg_ = build_cfg(m_);
    idom_ = dominators(cfg_);
    post_dominators(cfg_);  // rejects blocks that cannot reach a return
    collect_defs();
    check_phis();
    check_uses();
    check_types();
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ValidationError("method '" + cls_.name + "." + m_.name + "': " + msg);
  }

  void check_type(const std::string& type, const std::string& what) const {
    if (is_primitive_type(type) && type != kLabelType) return;
    if (p_.find_class(type)) return;
    fail("unknown type '" + type + "' for " + what);
  }

  void check_signature() {
    check_type(m_.return_type, "return value");
    std::set<std::string> names;
    for (const auto& prm : m_.params) {
      check_type(prm.type, "parameter '" + prm.name + "'");
      if (prm.name == "this") fail("parameter may not be named 'this'");
      if (is_shadow_name(prm.name)) {
        fail("name '" + prm.name + "' collides with the shadow namespace");
      }
      if (!names.insert(prm.name).second) {
        fail("duplicate parameter '" + prm.name + "'");
      }
    }
  }

  void define(const std::string& name, DefSite site, bool label) {
    if (label != is_shadow_name(name)) {
      fail(label ? "label variable '" + name + "' must start with secLbl$"
                 : "name '" + name + "' collides with the shadow namespace");
    }
    if (name == "pc" || name == "true" || name == "false" || name == "null") {
      fail("reserved name '" + name + "' cannot be assigned");
    }
    if (!defs_.emplace(name, site).second) {
      fail("SSA violation: '" + name + "' is assigned more than once");
    }
  }

  void collect_defs() {
    defs_.emplace("this", DefSite{0, -1});
    for (const auto& prm : m_.params) define(prm.name, DefSite{0, -1}, false);
    for (size_t b = 0; b < m_.blocks.size(); ++b) {
      const auto& body = m_.blocks[b].body;
      bool in_phi_prefix = true;
      for (size_t i = 0; i < body.size(); ++i) {
        const Instruction& inst = body[i];
        bool phi_like = std::holds_alternative<PhiInst>(inst) ||
                        std::holds_alternative<PhiLabelInst>(inst);
        if (phi_like && !in_phi_prefix) {
          fail("phi in block '" + m_.blocks[b].label +
               "' does not appear at the block start");
        }
        if (!phi_like && !std::holds_alternative<SetPcInst>(inst)) {
          in_phi_prefix = false;
        }
        if (const std::string* d = base_def(inst)) {
          define(*d, DefSite{b, static_cast<long>(i)}, false);
        }
        if (const std::string* d = label_def(inst)) {
          define(*d, DefSite{b, static_cast<long>(i)}, true);
        }
      }
    }
  }

  void check_dominated(const std::string& name, size_t block, long index) {
    auto it = defs_.find(name);
    if (it == defs_.end()) fail("use of undefined variable '" + name + "'");
    const DefSite& d = it->second;
    if (d.index < 0) return;
    if (d.block == block) {
      if (d.index >= index) {
        fail("use of '" + name + "' in block '" + m_.blocks[block].label +
             "' is not dominated by its definition");
      }
      return;
    }
    if (!tree_dominates(idom_, d.block, block)) {
      fail("use of '" + name + "' in block '" + m_.blocks[block].label +
           "' is not dominated by its definition");
    }
  }

  template <class V>
  void check_incoming(const std::vector<std::pair<std::string, V>>& incoming,
                      size_t block) {
    std::set<size_t> seen;
    for (const auto& [label, value] : incoming) {
      auto idx = cfg_.index_of(label);
      if (!idx || std::find(cfg_.pred[block].begin(), cfg_.pred[block].end(),
                            *idx) == cfg_.pred[block].end()) {
        fail("phi in block '" + m_.blocks[block].label + "' names '" + label +
             "', which is not a predecessor");
      }
      if (!seen.insert(*idx).second) {
        fail("phi in block '" + m_.blocks[block].label +
             "' has two entries for '" + label + "'");
      }
      std::vector<std::string> used;
      if constexpr (std::is_same_v<V, Operand>) {
        collect_operand(value, used);
      } else {
        collect_label_uses(value, used);
      }
      // The value must be available at the end of the predecessor.
      for (const auto& u : used) {
        check_dominated(u, *idx, static_cast<long>(m_.blocks[*idx].body.size()) + 1);
      }
    }
    if (seen.size() != cfg_.pred[block].size()) {
      fail("phi in block '" + m_.blocks[block].label +
           "' does not cover every predecessor");
    }
  }

  void check_phis() {
    for (size_t b = 0; b < m_.blocks.size(); ++b) {
      for (const auto& inst : m_.blocks[b].body) {
        if (const auto* phi = std::get_if<PhiInst>(&inst)) {
          check_incoming(phi->incoming, b);
        } else if (const auto* pl = std::get_if<PhiLabelInst>(&inst)) {
          check_incoming(pl->incoming, b);
        }
      }
    }
  }

  void check_uses() {
    for (size_t b = 0; b < m_.blocks.size(); ++b) {
      const auto& body = m_.blocks[b].body;
      for (size_t i = 0; i < body.size(); ++i) {
        for (const auto& u : uses_of(body[i])) {
          check_dominated(u, b, static_cast<long>(i));
        }
      }
      for (const auto& u : uses_of(m_.blocks[b].terminator)) {
        check_dominated(u, b, static_cast<long>(body.size()));
      }
    }
  }

  std::string receiver_class(const TypeMap& types, const std::string& var) {
    auto it = types.find(var);
    if (it == types.end() || !is_class_type(p_, it->second)) {
      fail("'" + var + "' is not an object (type " +
           (it == types.end() ? std::string("unknown") : it->second) + ")");
    }
    return it->second;
  }

  void check_types() {
    TypeMap types = infer_types(p_, cls_, m_);
    for (const auto& b : m_.blocks) {
      for (const auto& inst : b.body) {
        if (const auto* lf = std::get_if<LoadFieldInst>(&inst)) {
          std::string c = receiver_class(types, lf->object);
          if (!lookup_field(p_, c, lf->field)) {
            fail("unknown field '" + lf->field + "' of class '" + c + "'");
          }
        } else if (const auto* sf = std::get_if<StoreFieldInst>(&inst)) {
          std::string c = receiver_class(types, sf->object);
          if (!lookup_field(p_, c, sf->field)) {
            fail("unknown field '" + sf->field + "' of class '" + c + "'");
          }
        } else if (const auto* ls = std::get_if<LoadSlotInst>(&inst)) {
          std::string c = receiver_class(types, ls->object);
          if (!lookup_field(p_, c, ls->slot)) {
            fail("unknown shadow slot '" + ls->slot + "' of class '" + c + "'");
          }
        } else if (const auto* ss = std::get_if<StoreSlotInst>(&inst)) {
          std::string c = receiver_class(types, ss->object);
          if (!lookup_field(p_, c, ss->slot)) {
            fail("unknown shadow slot '" + ss->slot + "' of class '" + c + "'");
          }
        } else if (const auto* in = std::get_if<InstantiateInst>(&inst)) {
          if (const auto* ft = std::get_if<FieldTemplate>(&in->source)) {
            std::string c = receiver_class(types, ft->object);
            if (!lookup_field(p_, c, ft->field)) {
              fail("unknown field '" + ft->field + "' of class '" + c + "'");
            }
          }
        } else if (const auto* n = std::get_if<NewInst>(&inst)) {
          if (!p_.find_class(n->class_name)) {
            fail("unknown class '" + n->class_name + "'");
          }
        } else if (const auto* call = std::get_if<CallInst>(&inst)) {
          std::string c = receiver_class(types, call->object);
          auto ml = lookup_method(p_, c, call->method);
          if (!ml) fail("unknown method '" + call->method + "' of class '" + c + "'");
          if (ml->method->params.size() != call->args.size()) {
            fail("call to '" + c + "." + call->method + "' passes " +
                 std::to_string(call->args.size()) + " arguments, expected " +
                 std::to_string(ml->method->params.size()));
          }
        }
      }
    }
  }

  const Program& p_;
  const ClassDef& cls_;
  const MethodDef& m_;
  Cfg cfg_;
  DomTree idom_;
  std::map<std::string, DefSite> defs_;
};

}  // namespace

TypeMap infer_types(const Program& p, const ClassDef& cls, const MethodDef& m) {
  TypeMap types;
  types["this"] = cls.name;
  for (const auto& prm : m.params) types[prm.name] = prm.type;
  auto type_of = [&](const Operand& op) -> std::string {
    if (const auto* v = std::get_if<Var>(&op)) {
      auto it = types.find(v->name);
      return it == types.end() ? std::string() : it->second;
    }
    return literal_type(std::get<Literal>(op));
  };
  bool changed = true;
  while (changed) {
    changed = false;
    auto set = [&](const std::string& var, const std::string& type) {
      if (type.empty()) return;
      auto it = types.find(var);
      if (it == types.end() || (it->second == "null" && type != "null")) {
        types[var] = type;
        changed = true;
      }
    };
    for (const auto& b : m.blocks) {
      for (const auto& inst : b.body) {
        std::visit(
            [&](const auto& i) {
              using T = std::decay_t<decltype(i)>;
              if constexpr (std::is_same_v<T, ConstInst>) {
                set(i.dst, literal_type(i.value));
              } else if constexpr (std::is_same_v<T, CopyInst>) {
                set(i.dst, type_of(Var{i.src}));
              } else if constexpr (std::is_same_v<T, LoadFieldInst>) {
                std::string rt = type_of(Var{i.object});
                if (auto f = lookup_field(p, rt, i.field)) set(i.dst, f->field->type);
              } else if constexpr (std::is_same_v<T, NewInst>) {
                set(i.dst, i.class_name);
              } else if constexpr (std::is_same_v<T, CallInst>) {
                std::string rt = type_of(Var{i.object});
                if (auto ml = lookup_method(p, rt, i.method)) {
                  set(i.dst, ml->method->return_type);
                }
              } else if constexpr (std::is_same_v<T, BinOpInst>) {
                switch (i.op) {
                  case BinOpKind::kAdd:
                  case BinOpKind::kSub:
                  case BinOpKind::kMul:
                  case BinOpKind::kDiv:
                    set(i.dst, type_of(i.lhs) == "double" ||
                                       type_of(i.rhs) == "double"
                                   ? "double"
                                   : "long");
                    break;
                  case BinOpKind::kConcat:
                    set(i.dst, "string");
                    break;
                  default:
                    set(i.dst, "bool");
                }
              } else if constexpr (std::is_same_v<T, PhiInst>) {
                for (const auto& [lbl, v] : i.incoming) {
                  std::string t = type_of(v);
                  if (!t.empty()) set(i.dst, t);
                }
              } else if constexpr (std::is_same_v<T, JoinInst> ||
                                   std::is_same_v<T, LoadSlotInst> ||
                                   std::is_same_v<T, SavePcInst> ||
                                   std::is_same_v<T, InstantiateInst>) {
                set(i.dst, std::string(kLabelType));
              } else if constexpr (std::is_same_v<T, PhiLabelInst>) {
                if (i.dst) set(*i.dst, std::string(kLabelType));
              }
            },
            inst);
      }
    }
  }
  return types;
}

void verify_program(const Program& p) {
  std::set<std::string> names;
  for (const auto& c : p.classes) {
    if (is_primitive_type(c.name)) {
      throw ValidationError("class name '" + c.name + "' is a reserved type");
    }
    if (!names.insert(c.name).second) {
      throw ValidationError("duplicate class '" + c.name + "'");
    }
  }
  for (const auto& c : p.classes) {
    if (c.superclass && !p.find_class(*c.superclass)) {
      throw ValidationError("class '" + c.name + "' extends unknown class '" +
                            *c.superclass + "'");
    }
    // Cycle check.
    std::set<std::string> seen;
    const ClassDef* cur = &c;
    while (cur && cur->superclass) {
      if (!seen.insert(cur->name).second) {
        throw ValidationError("inheritance cycle through class '" + c.name + "'");
      }
      cur = p.find_class(*cur->superclass);
    }
  }
  for (const auto& c : p.classes) {
    std::set<std::string> members;
    for (const ClassDef* k : class_chain(p, c.name)) {
      for (const auto& f : k->fields) {
        if (!members.insert(f.name).second) {
          throw ValidationError("class '" + c.name + "': duplicate member '" +
                                f.name + "'");
        }
        bool label_field = f.type == kLabelType;
        if (label_field != is_shadow_name(f.name)) {
          throw ValidationError(
              "class '" + c.name + "': field '" + f.name +
              (label_field ? "' of type label must start with secLbl$"
                           : "' collides with the shadow namespace"));
        }
        if (!label_field && !is_primitive_type(f.type) && !p.find_class(f.type)) {
          throw ValidationError("class '" + c.name + "': unknown type '" +
                                f.type + "' for field '" + f.name + "'");
        }
      }
      for (const auto& m : k->methods) {
        if (!members.insert(m.name).second) {
          throw ValidationError("class '" + c.name + "': duplicate member '" +
                                m.name + "'");
        }
      }
    }
    for (const auto& m : c.methods) {
      if (m.is_native() && c.instrumented) {
        throw ValidationError("method '" + c.name + "." + m.name +
                              "' has no body; only library classes may "
                              "declare native methods");
      }
      MethodVerifier(p, c, m).run();
    }
  }
  if (p.entry) {
    auto dot = p.entry->find('.');
    std::string cls = p.entry->substr(0, dot);
    std::string meth = p.entry->substr(dot + 1);
    if (!p.find_class(cls) || !lookup_method(p, cls, meth)) {
      throw ValidationError("entry point '" + *p.entry + "' does not resolve");
    }
  }
  for (const auto& a : p.annotations) {
    if (!p.find_class(a.class_name) || !lookup_field(p, a.class_name, a.field)) {
      throw ValidationError("annotation for unknown field '" + a.class_name +
                            "." + a.field + "'");
    }
  }
}

}  // namespace sif
