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

#include "sif/runtime.h"

#include <cmath>
#include <cstdio>
#include <deque>
#include <unordered_map>

#include "sif/error.h"
#include "sif/instrument.h"
#include "sif/specs.h"

namespace sif {

std::string to_string(const RuntimeValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ObjRef>) {
          return "&" + std::to_string(x.id);
        } else {
          return to_string(Literal(x));
        }
      },
      v);
}

RuntimeValue from_literal(const Literal& lit) {
  return std::visit([](const auto& x) -> RuntimeValue { return x; }, lit);
}

std::string to_string(const LeakReport& r) {
  std::string out = "leak in " + r.method + " block " + r.block +
                    " instruction " + std::to_string(r.instruction) + ": " +
                    r.reason;
  if (r.offending) out += "; label " + to_string(*r.offending);
  if (r.bound) out += " is not below " + to_string(*r.bound);
  return out;
}

namespace {

struct Object {
  const ClassDef* cls = nullptr;
  std::unordered_map<std::string, RuntimeValue> fields;
  std::unordered_map<std::string, Label> slots;
};

struct LeakSignal {
  LeakReport report;
};

struct Frame {
  const ClassDef* owner = nullptr;
  const MethodDef* method = nullptr;
  std::unordered_map<std::string, RuntimeValue> vars;
  std::unordered_map<std::string, Label> labels;
  Label pc;
  size_t block = 0;
  size_t index = 0;
};

std::string type_name(const RuntimeValue& v) {
  static const char* names[] = {"null", "integer", "float", "bool", "string",
                                "object"};
  return names[v.index()];
}

int64_t wrap(uint64_t x) { return static_cast<int64_t>(x); }

class Interpreter {
 public:
  Interpreter(const Program& p, const LatticeDef& lat, const RunOptions& opt)
      : p_(p), lat_(lat), opt_(opt), annotations_(specs_from_annotations(p)) {}

  ObjRef new_object(const ClassDef& cls) {
    Object o;
    o.cls = &cls;
    for (const auto& f : all_fields(p_, cls.name)) {
      if (f.type == kLabelType) {
        o.slots.emplace(f.name, Label::Public());
      } else {
        o.fields.emplace(f.name, Null{});
      }
    }
    heap_.push_back(std::move(o));
    return ObjRef{heap_.size() - 1};
  }

  Object& deref(const RuntimeValue& v, const std::string& what) {
    const ObjRef* r = std::get_if<ObjRef>(&v);
    if (!r) {
      throw RunError(what + ": expected an object, found " + type_name(v));
    }
    return heap_.at(r->id);
  }

  void store_slot(ObjRef ref, const std::string& slot, const Label& l) {
    Object& o = heap_.at(ref.id);
    auto it = o.slots.find(slot);
    if (it == o.slots.end()) {
      throw RunError("object of class '" + o.cls->name +
                     "' has no shadow slot '" + slot + "'");
    }
    it->second = l;
    if (opt_.slot_log) opt_.slot_log->push_back({ref.id, o.cls->name, slot, l});
  }

  Label load_slot(ObjRef ref, const std::string& slot) {
    Object& o = heap_.at(ref.id);
    auto it = o.slots.find(slot);
    if (it == o.slots.end()) {
      throw RunError("object of class '" + o.cls->name +
                     "' has no shadow slot '" + slot + "'");
    }
    return it->second;
  }

  RuntimeValue call(ObjRef self, const std::string& method,
                    const std::vector<RuntimeValue>& args, size_t depth) {
    const ClassDef* dyn = heap_.at(self.id).cls;
    auto ml = lookup_method(p_, dyn->name, method);
    if (!ml) {
      throw RunError("class '" + dyn->name + "' has no method '" + method + "'");
    }
    const MethodDef& m = *ml->method;
    if (args.size() != m.params.size()) {
      throw RunError(ml->owner->name + "." + method + " expects " +
                     std::to_string(m.params.size()) + " arguments, got " +
                     std::to_string(args.size()));
    }
    if (m.is_native()) return call_native(*ml->owner, m, args);
    if (depth >= opt_.max_stack) {
      throw RunError("stack depth limit of " + std::to_string(opt_.max_stack) +
                     " frames exceeded");
    }
    Frame f;
    f.owner = ml->owner;
    f.method = &m;
    f.vars.emplace("this", self);
    for (size_t i = 0; i < args.size(); ++i) {
      f.vars.insert_or_assign(m.params[i].name, args[i]);
    }
    return execute(f, depth);
  }

 private:
  std::string where(const Frame& f) const {
    return f.owner->name + "." + f.method->name;
  }

  [[noreturn]] void leak(const Frame& f, std::string reason,
                         std::optional<Label> offending = std::nullopt,
                         std::optional<Label> bound = std::nullopt) {
    LeakReport r;
    r.method = where(f);
    r.block = f.method->blocks[f.block].label;
    r.instruction = f.index;
    r.offending = std::move(offending);
    r.bound = std::move(bound);
    r.reason = std::move(reason);
    throw LeakSignal{std::move(r)};
  }

  void step() {
    if (++steps_ > opt_.max_steps) {
      throw RunError("step limit of " + std::to_string(opt_.max_steps) +
                     " exceeded");
    }
  }

  const std::unordered_map<std::string, size_t>& block_index(
      const MethodDef& m) {
    auto [it, inserted] = block_index_.try_emplace(&m);
    if (inserted) {
      for (size_t i = 0; i < m.blocks.size(); ++i) {
        it->second.emplace(m.blocks[i].label, i);
      }
    }
    return it->second;
  }

  RuntimeValue execute(Frame& f, size_t depth) {
    const MethodDef& m = *f.method;
    const auto& index = block_index(m);
    std::optional<size_t> prev;
    f.block = 0;
    for (;;) {
      const BasicBlock& blk = m.blocks[f.block];
      if (prev) enter_block(f, blk, m.blocks[*prev].label);
      for (f.index = 0; f.index < blk.body.size(); ++f.index) {
        const Instruction& inst = blk.body[f.index];
        if (std::holds_alternative<PhiInst>(inst) ||
            std::holds_alternative<PhiLabelInst>(inst)) {
          if (!prev) throw RunError(where(f) + ": phi in the first block");
          continue;
        }
        step();
        exec(f, inst, depth);
      }
      step();
      const Terminator& t = blk.terminator;
      prev = f.block;
      if (const auto* br = std::get_if<BranchInst>(&t)) {
        const RuntimeValue& c = var(f, br->cond);
        const bool* b = std::get_if<bool>(&c);
        if (!b) {
          throw RunError(where(f) + ": branch condition '" + br->cond +
                         "' is " + type_name(c) + ", not bool");
        }
        f.block = *b ? index.at(br->target) : f.block + 1;
      } else if (const auto* g = std::get_if<GotoInst>(&t)) {
        f.block = index.at(g->target);
      } else {
        return eval(f, std::get<ReturnInst>(t).value);
      }
    }
  }

  // Phis read the values live at the end of the predecessor, all at once.
  void enter_block(Frame& f, const BasicBlock& blk, const std::string& pred) {
    std::vector<std::pair<const Instruction*, std::variant<RuntimeValue, Label>>>
        pending;
    for (const Instruction& inst : blk.body) {
      if (const auto* phi = std::get_if<PhiInst>(&inst)) {
        pending.emplace_back(&inst, eval(f, incoming_for(f, phi->incoming, pred)));
      } else if (const auto* lphi = std::get_if<PhiLabelInst>(&inst)) {
        pending.emplace_back(&inst,
                             eval_label(f, incoming_for(f, lphi->incoming, pred)));
      }
    }
    for (auto& [inst, value] : pending) {
      if (const auto* phi = std::get_if<PhiInst>(inst)) {
        f.vars.insert_or_assign(phi->dst, std::get<RuntimeValue>(value));
      } else {
        const auto& lphi = std::get<PhiLabelInst>(*inst);
        if (lphi.dst) {
          f.labels.insert_or_assign(*lphi.dst, std::get<Label>(value));
        } else {
          f.pc = std::get<Label>(value);
        }
      }
    }
  }

  template <class V>
  const V& incoming_for(const Frame& f,
                        const std::vector<std::pair<std::string, V>>& incoming,
                        const std::string& pred) {
    for (const auto& [label, value] : incoming) {
      if (label == pred) return value;
    }
    throw RunError(where(f) + ": phi has no entry for predecessor '" + pred + "'");
  }

  const RuntimeValue& var(const Frame& f, const std::string& name) {
    auto it = f.vars.find(name);
    if (it == f.vars.end()) {
      throw RunError(where(f) + ": variable '" + name + "' is undefined");
    }
    return it->second;
  }

  RuntimeValue eval(const Frame& f, const Operand& op) {
    if (const Var* v = std::get_if<Var>(&op)) return var(f, v->name);
    return from_literal(std::get<Literal>(op));
  }

  Label eval_label(const Frame& f, const LabelOperand& op) {
    if (const auto* v = std::get_if<LabelVar>(&op)) {
      auto it = f.labels.find(v->name);
      if (it == f.labels.end()) {
        throw RunError(where(f) + ": label '" + v->name + "' is undefined");
      }
      return it->second;
    }
    if (std::holds_alternative<PcRef>(op)) return f.pc;
    return std::get<Label>(op);
  }

  Label join_of(const Frame& f, const std::vector<LabelOperand>& ops) {
    Label out = Label::Public();
    for (const auto& op : ops) out = join(lat_, out, eval_label(f, op));
    return out;
  }

  static std::optional<ParamValue> to_param(const RuntimeValue& v) {
    return std::visit(
        [](const auto& x) -> std::optional<ParamValue> {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Null>) {
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, int64_t>) {
            return ParamValue(x);
          } else if constexpr (std::is_same_v<T, bool>) {
            return ParamValue(int64_t{x});
          } else if constexpr (std::is_same_v<T, std::string>) {
            return ParamValue(x);
          } else if constexpr (std::is_same_v<T, ObjRef>) {
            return ParamValue(ObjectRef{x.id});
          } else {
            throw RunError("a float cannot parametrize a label");
          }
        },
        v);
  }

  Label instantiate_checked(const Frame& f, const LabelTemplate& t,
                            const DependencyResolver& resolve) {
    try {
      return instantiate(lat_, t, resolve);
    } catch (const UnresolvedDependency& e) {
      leak(f, std::string(e.what()) + " in " + to_string(t));
    } catch (const ValidationError& e) {
      throw RunError(where(f) + ": " + e.what());
    }
  }

  Label instantiate_inst(const Frame& f, const InstantiateInst& i) {
    if (const auto* lt = std::get_if<LocalsTemplate>(&i.source)) {
      return instantiate_checked(
          f, lt->tmpl, [&](const FieldPath& path) -> std::optional<ParamValue> {
            auto it = f.vars.find(path.front());
            if (path.size() != 1 || it == f.vars.end()) return std::nullopt;
            return to_param(it->second);
          });
    }
    const auto& ft = std::get<FieldTemplate>(i.source);
    const RuntimeValue& ref = var(f, ft.object);
    Object& o = deref(ref, where(f) + ": instantiate " + ft.object);
    const LabelTemplate* tmpl =
        annotations_.effective_field_annotation(p_, o.cls->name, ft.field);
    if (!tmpl) {
      if (ft.mode == FieldTemplateMode::kBound) return Label::Secret();
      std::string slot = field_slot_name(ft.field);
      if (!o.slots.count(slot)) slot = object_slot_name();
      return load_slot(std::get<ObjRef>(ref), slot);
    }
    return instantiate_checked(
        f, *tmpl, [&](const FieldPath& path) -> std::optional<ParamValue> {
          auto it = o.fields.find(path.front());
          if (path.size() != 1 || it == o.fields.end()) return std::nullopt;
          return to_param(it->second);
        });
  }

  void exec(Frame& f, const Instruction& inst, size_t depth) {
    std::visit([&](const auto& i) { exec_one(f, i, depth); }, inst);
  }

  void exec_one(Frame& f, const ConstInst& i, size_t) {
    f.vars.insert_or_assign(i.dst, from_literal(i.value));
  }
  void exec_one(Frame& f, const CopyInst& i, size_t) {
    f.vars.insert_or_assign(i.dst, var(f, i.src));
  }
  void exec_one(Frame& f, const LoadFieldInst& i, size_t) {
    Object& o = deref(var(f, i.object), where(f) + ": read of " + i.object +
                                             "." + i.field);
    auto it = o.fields.find(i.field);
    if (it == o.fields.end()) {
      throw RunError(where(f) + ": class '" + o.cls->name + "' has no field '" +
                     i.field + "'");
    }
    f.vars.insert_or_assign(i.dst, it->second);
  }
  void exec_one(Frame& f, const StoreFieldInst& i, size_t) {
    RuntimeValue v = eval(f, i.value);
    Object& o = deref(var(f, i.object), where(f) + ": write of " + i.object +
                                             "." + i.field);
    auto it = o.fields.find(i.field);
    if (it == o.fields.end()) {
      throw RunError(where(f) + ": class '" + o.cls->name + "' has no field '" +
                     i.field + "'");
    }
    it->second = std::move(v);
  }
  void exec_one(Frame& f, const NewInst& i, size_t) {
    const ClassDef* c = p_.find_class(i.class_name);
    if (!c) throw RunError(where(f) + ": unknown class '" + i.class_name + "'");
    f.vars.insert_or_assign(i.dst, new_object(*c));
  }
  void exec_one(Frame& f, const CallInst& i, size_t depth) {
    const RuntimeValue& recv = var(f, i.object);
    deref(recv, where(f) + ": call of " + i.object + "." + i.method);
    std::vector<RuntimeValue> args;
    for (const auto& a : i.args) args.push_back(eval(f, a));
    RuntimeValue r = call(std::get<ObjRef>(recv), i.method, args, depth + 1);
    f.vars.insert_or_assign(i.dst, std::move(r));
  }
  void exec_one(Frame& f, const BinOpInst& i, size_t) {
    f.vars.insert_or_assign(i.dst,
                            binop(f, i.op, eval(f, i.lhs), eval(f, i.rhs)));
  }
  void exec_one(Frame&, const PhiInst&, size_t) {}
  void exec_one(Frame&, const PhiLabelInst&, size_t) {}

  void exec_one(Frame& f, const JoinInst& i, size_t) {
    f.labels.insert_or_assign(i.dst, join_of(f, i.operands));
  }
  void exec_one(Frame& f, const LoadSlotInst& i, size_t) {
    const RuntimeValue& ref = var(f, i.object);
    deref(ref, where(f) + ": slot read " + i.object + "." + i.slot);
    f.labels.insert_or_assign(i.dst, load_slot(std::get<ObjRef>(ref), i.slot));
  }
  void exec_one(Frame& f, const StoreSlotInst& i, size_t) {
    const RuntimeValue& ref = var(f, i.object);
    deref(ref, where(f) + ": slot write " + i.object + "." + i.slot);
    store_slot(std::get<ObjRef>(ref), i.slot, eval_label(f, i.value));
  }
  void exec_one(Frame& f, const AssertFlowInst& i, size_t) {
    Label v = eval_label(f, i.value);
    Label b = eval_label(f, i.bound);
    if (!leq(lat_, v, b)) leak(f, i.reason, v, b);
  }
  void exec_one(Frame& f, const SetPcInst& i, size_t) {
    f.pc = join_of(f, i.operands);
  }
  void exec_one(Frame& f, const SavePcInst& i, size_t) {
    f.labels.insert_or_assign(i.dst, f.pc);
  }
  void exec_one(Frame& f, const InstantiateInst& i, size_t) {
    f.labels.insert_or_assign(i.dst, instantiate_inst(f, i));
  }
  void exec_one(Frame& f, const LeakHaltInst& i, size_t) { leak(f, i.reason); }

  RuntimeValue binop(const Frame& f, BinOpKind op, const RuntimeValue& a,
                     const RuntimeValue& b) {
    auto fail = [&]() -> RuntimeValue {
      throw RunError(where(f) + ": cannot apply '" + std::string(to_string(op)) +
                     "' to " + type_name(a) + " and " + type_name(b));
    };
    const auto* ai = std::get_if<int64_t>(&a);
    const auto* bi = std::get_if<int64_t>(&b);
    const bool numeric =
        (ai || std::holds_alternative<double>(a)) &&
        (bi || std::holds_alternative<double>(b));
    auto as_double = [](const RuntimeValue& v) {
      if (const auto* i = std::get_if<int64_t>(&v)) return double(*i);
      return std::get<double>(v);
    };
    switch (op) {
      case BinOpKind::kAdd:
      case BinOpKind::kSub:
      case BinOpKind::kMul:
      case BinOpKind::kDiv: {
        if (!numeric) return fail();
        if (ai && bi) {
          uint64_t x = uint64_t(*ai), y = uint64_t(*bi);
          switch (op) {
            case BinOpKind::kAdd: return wrap(x + y);
            case BinOpKind::kSub: return wrap(x - y);
            case BinOpKind::kMul: return wrap(x * y);
            default:
              if (*bi == 0) throw RunError(where(f) + ": division by zero");
              if (*ai == INT64_MIN && *bi == -1) return *ai;
              return *ai / *bi;
          }
        }
        double x = as_double(a), y = as_double(b);
        switch (op) {
          case BinOpKind::kAdd: return x + y;
          case BinOpKind::kSub: return x - y;
          case BinOpKind::kMul: return x * y;
          default:
            if (y == 0.0) throw RunError(where(f) + ": division by zero");
            return x / y;
        }
      }
      case BinOpKind::kConcat: {
        const auto* x = std::get_if<std::string>(&a);
        const auto* y = std::get_if<std::string>(&b);
        if (!x || !y) return fail();
        return *x + *y;
      }
      case BinOpKind::kEq:
        if (ai && bi) return *ai == *bi;
        if (numeric) return as_double(a) == as_double(b);
        return a == b;
      case BinOpKind::kLt:
      case BinOpKind::kGt: {
        bool lt;
        if (ai && bi) {
          lt = op == BinOpKind::kLt ? *ai < *bi : *ai > *bi;
        } else if (numeric) {
          lt = op == BinOpKind::kLt ? as_double(a) < as_double(b)
                                    : as_double(a) > as_double(b);
        } else if (std::holds_alternative<std::string>(a) &&
                   std::holds_alternative<std::string>(b)) {
          lt = op == BinOpKind::kLt
                   ? std::get<std::string>(a) < std::get<std::string>(b)
                   : std::get<std::string>(a) > std::get<std::string>(b);
        } else {
          return fail();
        }
        return lt;
      }
      case BinOpKind::kAnd:
      case BinOpKind::kOr: {
        const auto* x = std::get_if<bool>(&a);
        const auto* y = std::get_if<bool>(&b);
        if (!x || !y) return fail();
        return op == BinOpKind::kAnd ? (*x && *y) : (*x || *y);
      }
    }
    return fail();
  }

  // Bodiless library methods.
  RuntimeValue call_native(const ClassDef& owner, const MethodDef& m,
                           const std::vector<RuntimeValue>& args) {
    const std::string key = owner.name + "." + m.name;
    auto bad = [&]() -> RuntimeValue {
      throw RunError("native " + key + " cannot take these arguments");
    };
    if (key == "Text.ofLong") {
      const auto* x = std::get_if<int64_t>(&args.at(0));
      return x ? RuntimeValue(std::to_string(*x)) : bad();
    }
    if (key == "Text.ofDouble") {
      const auto* x = std::get_if<double>(&args.at(0));
      if (!x) return bad();
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f", *x);
      return std::string(buf);
    }
    if (key == "Text.ofBool") {
      const auto* x = std::get_if<bool>(&args.at(0));
      return x ? RuntimeValue(std::string(*x ? "true" : "false")) : bad();
    }
    if (key == "Text.length") {
      const auto* x = std::get_if<std::string>(&args.at(0));
      return x ? RuntimeValue(int64_t(x->size())) : bad();
    }
    throw RunError("no native implementation for " + key);
  }

  const Program& p_;
  const LatticeDef& lat_;
  const RunOptions& opt_;
  ResolvedSpecs annotations_;
  std::deque<Object> heap_;
  std::unordered_map<const MethodDef*, std::unordered_map<std::string, size_t>>
      block_index_;
  uint64_t steps_ = 0;
};

}  // namespace

RunOutcome run(const Program& p, const LatticeDef& lat, const std::string& entry,
               const std::vector<EntryArg>& args, const Label& entry_pc,
               const RunOptions& options) {
  auto dot = entry.rfind('.');
  if (dot == std::string::npos) {
    throw RunError("entry '" + entry + "' is not of the form Class.method");
  }
  std::string cls_name = entry.substr(0, dot), method = entry.substr(dot + 1);
  const ClassDef* cls = p.find_class(cls_name);
  if (!cls) throw RunError("unknown entry class '" + cls_name + "'");
  auto ml = lookup_method(p, cls_name, method);
  if (!ml) throw RunError("unknown entry method '" + entry + "'");
  if (ml->method->params.size() != args.size()) {
    throw RunError("entry '" + entry + "' expects " +
                   std::to_string(ml->method->params.size()) +
                   " arguments, got " + std::to_string(args.size()));
  }
  for (const auto& a : args) lat.check_well_formed(a.label);
  lat.check_well_formed(entry_pc);

  Interpreter in(p, lat, options);
  ObjRef self = in.new_object(*cls);
  const bool monitored = p.instrumented && cls->instrumented;
  if (monitored) {
    in.store_slot(self, object_slot_name(), entry_pc);
    for (size_t i = 0; i < args.size(); ++i) {
      in.store_slot(self, param_slot_name(method, i), args[i].label);
    }
    in.store_slot(self, pc_in_slot_name(method), entry_pc);
  }
  std::vector<RuntimeValue> values;
  for (const auto& a : args) values.push_back(a.value);

  RunOutcome out;
  try {
    out.value = in.call(self, method, values, 0);
    out.label = monitored
                    ? in.load_slot(self, ret_slot_name(method))
                    : Label::Public();
  } catch (LeakSignal& s) {
    out.kind = RunOutcome::Kind::kLeak;
    out.leak = std::move(s.report);
  }
  return out;
}

}  // namespace sif
