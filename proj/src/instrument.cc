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

#include "sif/instrument.h"

#include <functional>
#include <set>

#include "sif/error.h"

namespace sif {

std::string object_slot_name() { return std::string(kShadowPrefix) + "this"; }

std::string field_slot_name(std::string_view field) {
  return std::string(kShadowPrefix) + std::string(field);
}

std::string param_slot_name(std::string_view method, size_t i) {
  return std::string(kShadowPrefix) + std::string(method) + "$p" +
         std::to_string(i);
}

std::string ret_slot_name(std::string_view method) {
  return std::string(kShadowPrefix) + std::string(method) + "$ret";
}

std::string pc_in_slot_name(std::string_view method) {
  return std::string(kShadowPrefix) + std::string(method) + "$pcIn";
}

bool is_instrumented_type(const Program& p, std::string_view type) {
  const ClassDef* c = p.find_class(type);
  return c && c->instrumented;
}

std::string ShadowLayout::label_slot_for_field(const Program& p,
                                               std::string_view cls,
                                               std::string_view field) const {
  auto fl = lookup_field(p, cls, field);
  if (!fl) {
    throw ValidationError("unknown field '" + std::string(cls) + "." +
                          std::string(field) + "'");
  }
  if (is_instrumented_type(p, fl->field->type)) return object_slot_name();
  return field_slot_name(field);
}

std::pair<Program, ShadowLayout> inject_shadow_fields(const Program& p) {
  if (p.instrumented) throw ValidationError("program is already instrumented");
  Program out = p;
  ShadowLayout layout;
  for (ClassDef& c : out.classes) {
    if (c.superclass) {
      const ClassDef* s = p.find_class(*c.superclass);
      if (s && s->instrumented != c.instrumented) {
        throw ValidationError("class '" + c.name + "' and its superclass '" +
                              s->name +
                              "' must both be library or both be application "
                              "classes");
      }
    }
    for (const auto& f : c.fields) {
      if (f.name.starts_with(kShadowPrefix)) {
        throw ValidationError("field '" + c.name + "." + f.name +
                              "' collides with the shadow-slot namespace");
      }
    }
    for (const auto& m : c.methods) {
      if (m.name.starts_with(kShadowPrefix)) {
        throw ValidationError("method '" + c.name + "." + m.name +
                              "' collides with the shadow-slot namespace");
      }
    }
    if (!c.instrumented) continue;

    ClassShadow sh;
    std::vector<std::string> slots;
    if (!c.superclass) {
      sh.has_object_slot = true;
      slots.push_back(object_slot_name());
    }
    for (const auto& f : c.fields) {
      if (is_instrumented_type(p, f.type)) continue;
      sh.field_slots.emplace_back(f.name, field_slot_name(f.name));
      slots.push_back(field_slot_name(f.name));
    }
    for (const auto& m : c.methods) {
      MethodSlots ms;
      for (size_t i = 0; i < m.params.size(); ++i) {
        ms.params.push_back(param_slot_name(m.name, i));
        slots.push_back(ms.params.back());
      }
      ms.ret = ret_slot_name(m.name);
      ms.pc_in = pc_in_slot_name(m.name);
      slots.push_back(ms.ret);
      slots.push_back(ms.pc_in);
      sh.method_slots.emplace_back(m.name, std::move(ms));
    }
    std::set<std::string> seen;
    for (const auto& s : slots) {
      if (!seen.insert(s).second) {
        throw ValidationError("shadow slot '" + s + "' of class '" + c.name +
                              "' is generated twice; rename a member");
      }
      c.fields.push_back(FieldDef{std::string(kLabelType), s});
    }
    layout.classes[c.name] = std::move(sh);
  }
  return {std::move(out), std::move(layout)};
}

std::string print_manifest(const Program& p, const ShadowLayout& layout) {
  std::string out;
  for (const auto& c : p.classes) {
    auto it = layout.classes.find(c.name);
    if (it == layout.classes.end()) continue;
    const ClassShadow& sh = it->second;
    if (sh.has_object_slot) {
      out += c.name + "\tobject\t-\t" + object_slot_name() + "\n";
    }
    for (const auto& [f, slot] : sh.field_slots) {
      out += c.name + "\tfield\t" + f + "\t" + slot + "\n";
    }
    for (const auto& [m, ms] : sh.method_slots) {
      for (const auto& s : ms.params) {
        out += c.name + "\tparam\t" + m + "\t" + s + "\n";
      }
      out += c.name + "\tret\t" + m + "\t" + ms.ret + "\n";
      out += c.name + "\tpcIn\t" + m + "\t" + ms.pc_in + "\n";
    }
  }
  return out;
}

std::vector<BlockPcPlan> plan_pc(const Cfg& c) {
  DomTree idom = dominators(c);
  DomTree ipdom = post_dominators(c);
  auto opens = scope_opens(c, ipdom, idom);
  std::vector<BlockPcPlan> plan(c.num_blocks());
  for (size_t b = 0; b < c.num_blocks(); ++b) {
    plan[b].saves_pc = c.ends_in_branch[b];
    if (opens[b]) {
      plan[b].entry = BlockPcPlan::Entry::kRestore;
      plan[b].opener = opens[b];
    } else if (c.pred[b].size() >= 2) {
      plan[b].entry = BlockPcPlan::Entry::kMerge;
    }
  }
  return plan;
}

namespace {

// Reverse postorder from the entry; every block is reachable in a verified
// method.
std::vector<size_t> reverse_postorder(const Cfg& c) {
  std::vector<size_t> order;
  std::vector<bool> seen(c.num_blocks(), false);
  std::function<void(size_t)> dfs = [&](size_t b) {
    seen[b] = true;
    for (size_t s : c.succ[b]) {
      if (!seen[s]) dfs(s);
    }
    order.push_back(b);
  };
  dfs(c.entry);
  return {order.rbegin(), order.rend()};
}

class MethodRewriter {
 public:
  MethodRewriter(const InstrumentContext& ctx, const ClassDef& cls,
                 const MethodDef& m)
      : ctx_(ctx), p_(*ctx.original), cls_(cls), m_(m) {}

  MethodDef run() {
    cfg_ = build_cfg(m_);
    if (!cfg_.pred[cfg_.entry].empty()) {
      throw ValidationError(where() + ": the first block may not be a jump "
                                      "target");
    }
    idom_ = dominators(cfg_);
    plan_ = plan_pc(cfg_);
    types_ = infer_types(p_, cls_, m_);
    for (const auto& [name, type] : types_) used_.insert(name);

    const size_t n = cfg_.num_blocks();
    defs_.assign(n, {});
    saved_pc_.assign(n, std::nullopt);
    out_.assign(n, BasicBlock{});
    for (size_t b : reverse_postorder(cfg_)) {
      cur_ = b;
      rewrite_block(m_.blocks[b]);
    }
    for (const auto& ph : pending_) resolve_phi(ph);

    MethodDef out = m_;
    for (size_t b = 0; b < n; ++b) out.blocks[b] = std::move(out_[b]);
    return out;
  }

 private:
  struct PendingPhi {
    size_t block;
    size_t index;
    std::vector<std::pair<std::string, Operand>> incoming;
  };

  std::string where() const { return cls_.name + "." + m_.name; }

  std::string fresh(const std::string& base) {
    if (used_.insert(base).second) return base;
    for (size_t i = 1;; ++i) {
      std::string name = base + "$" + std::to_string(i);
      if (used_.insert(name).second) return name;
    }
  }

  std::string temp() {
    for (;;) {
      std::string name = std::string(kShadowPrefix) + "$t" +
                         std::to_string(next_temp_++);
      if (used_.insert(name).second) return name;
    }
  }

  // New label version for program variable `var`.
  std::string define_label(const std::string& var) {
    std::string name = fresh(std::string(kShadowPrefix) + var);
    defs_[cur_].emplace_back(var, name);
    return name;
  }

  // Label version of `var` visible at the current end of `block`.
  std::string lookup(const std::string& var, size_t block) const {
    for (std::optional<size_t> b = block; b; b = idom_[*b]) {
      const auto& defs = defs_[*b];
      for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
        if (it->first == var) return it->second;
      }
    }
    throw std::logic_error(where() + ": no label for '" + var + "'");
  }

  LabelOperand label_of(const Operand& op, size_t block) const {
    if (const Var* v = std::get_if<Var>(&op)) {
      if (v->name == "this") return Label::Public();
      return LabelVar{lookup(v->name, block)};
    }
    return Label::Public();
  }
  LabelOperand label_of(const Operand& op) const { return label_of(op, cur_); }
  LabelOperand label_of_var(const std::string& name) const {
    return label_of(Operand(Var{name}));
  }

  void emit(Instruction inst) { out_[cur_].body.push_back(std::move(inst)); }

  const std::string& static_class(const std::string& var) const {
    auto it = types_.find(var);
    if (it == types_.end()) {
      throw std::logic_error(where() + ": untyped variable '" + var + "'");
    }
    return it->second;
  }

  // Classes an object of static class `cls` may have at run time.
  std::vector<std::string> possible_classes(const std::string& cls) const {
    std::vector<std::string> out;
    for (const auto& c : p_.classes) {
      if (is_subclass_of(p_, c.name, cls)) out.push_back(c.name);
    }
    return out;
  }

  bool annotated_somewhere(const std::string& cls, const std::string& f) const {
    for (const auto& c : possible_classes(cls)) {
      if (ctx_.specs->effective_field_annotation(p_, c, f)) return true;
    }
    return false;
  }

  bool annotated_everywhere(const std::string& cls, const std::string& f) const {
    for (const auto& c : possible_classes(cls)) {
      if (!ctx_.specs->effective_field_annotation(p_, c, f)) return false;
    }
    return true;
  }

  const std::string& instrumented_receiver(const std::string& obj,
                                           const std::string& what) const {
    const std::string& cls = static_class(obj);
    if (!is_instrumented_type(p_, cls)) {
      throw ValidationError(where() + ": " + what + " on library object '" +
                            obj + "' of class '" + cls + "' is not supported");
    }
    return cls;
  }

  const MethodContracts* contracts() const {
    return ctx_.specs ? ctx_.specs->method_contracts(p_, cls_.name, m_.name)
                      : nullptr;
  }

  void method_prologue() {
    for (size_t i = 0; i < m_.params.size(); ++i) {
      std::string l = define_label(m_.params[i].name);
      emit(LoadSlotInst{l, "this", param_slot_name(m_.name, i)});
    }
    std::string pc_in = fresh(std::string(kShadowPrefix) + "$pcIn");
    emit(LoadSlotInst{pc_in, "this", pc_in_slot_name(m_.name)});
    emit(SetPcInst{{LabelVar{pc_in}}});
    const MethodContracts* mc = contracts();
    if (!mc) return;
    for (size_t i = 0; i < m_.params.size(); ++i) {
      const auto& c = mc->params[i];
      if (!c) continue;
      const std::string& name = m_.params[i].name;
      if (c->modifier == Modifier::kCheck) {
        std::string t = temp();
        emit(InstantiateInst{t, LocalsTemplate{c->tmpl}});
        emit(AssertFlowInst{label_of_var(name), LabelVar{t},
                            "argument '" + name + "' of " + where()});
      } else {
        std::string l = define_label(name);
        emit(InstantiateInst{l, LocalsTemplate{c->tmpl}});
      }
    }
  }

  void rewrite_block(const BasicBlock& in) {
    out_[cur_].label = in.label;
    const BlockPcPlan& plan = plan_[cur_];
    if (cur_ == cfg_.entry) method_prologue();
    if (plan.entry == BlockPcPlan::Entry::kRestore) {
      emit(SetPcInst{{LabelVar{*saved_pc_[*plan.opener]}}});
    } else if (plan.entry == BlockPcPlan::Entry::kMerge) {
      PhiLabelInst phi;
      for (size_t pr : cfg_.pred[cur_]) {
        phi.incoming.emplace_back(cfg_.labels[pr], PcRef{});
      }
      emit(std::move(phi));
    }
    for (const auto& inst : in.body) rewrite(inst);
    rewrite_terminator(in.terminator);
  }

  void rewrite(const Instruction& inst) {
    if (is_monitor(inst)) {
      throw ValidationError(where() + ": input already contains monitor "
                                      "instruction '" +
                            to_string(inst) + "'");
    }
    std::visit([this](const auto& i) { rewrite_one(i); }, inst);
  }

  // (const)
  void rewrite_one(const ConstInst& i) {
    emit(i);
    emit(JoinInst{define_label(i.dst), {Label::Public(), PcRef{}}});
  }

  // (local)
  void rewrite_one(const CopyInst& i) {
    LabelOperand src = label_of_var(i.src);
    emit(i);
    emit(JoinInst{define_label(i.dst), {src, PcRef{}}});
  }

  // (bin op)
  void rewrite_one(const BinOpInst& i) {
    LabelOperand l = label_of(i.lhs), r = label_of(i.rhs);
    emit(i);
    emit(JoinInst{define_label(i.dst), {l, r, PcRef{}}});
  }

  // (new)
  void rewrite_one(const NewInst& i) {
    emit(i);
    emit(JoinInst{define_label(i.dst), {Label::Public(), PcRef{}}});
    if (is_instrumented_type(p_, i.class_name)) {
      emit(StoreSlotInst{i.dst, object_slot_name(), PcRef{}});
    }
  }

  // (phi); label operands are filled in once every block is rewritten.
  void rewrite_one(const PhiInst& i) {
    emit(i);
    PhiLabelInst phi;
    phi.dst = define_label(i.dst);
    pending_.push_back({cur_, out_[cur_].body.size(), i.incoming});
    emit(std::move(phi));
  }

  // Whether label variable `l` is defined in `block` by a join with the pc
  // that holds at the block's exit.
  bool carries_exit_pc(const LabelOperand& l, size_t block) const {
    const LabelVar* v = std::get_if<LabelVar>(&l);
    if (!v || cfg_.ends_in_branch[block]) return false;
    for (const auto& inst : out_[block].body) {
      const auto* j = std::get_if<JoinInst>(&inst);
      if (!j || j->dst != v->name) continue;
      for (const auto& op : j->operands) {
        if (std::holds_alternative<PcRef>(op)) return true;
      }
    }
    return false;
  }

  // An incoming value is chosen by the control path, so its label is joined
  // with the pc at the end of the predecessor.
  void resolve_phi(const PendingPhi& ph) {
    std::vector<std::pair<std::string, LabelOperand>> incoming;
    for (const auto& [pred, value] : ph.incoming) {
      size_t b = *cfg_.index_of(pred);
      LabelOperand l = label_of(value, b);
      if (!carries_exit_pc(l, b)) {
        std::string t = temp();
        out_[b].body.push_back(JoinInst{t, {l, PcRef{}}});
        l = LabelVar{t};
      }
      incoming.emplace_back(pred, std::move(l));
    }
    std::get<PhiLabelInst>(out_[ph.block].body[ph.index]).incoming =
        std::move(incoming);
  }

  // (field)
  void rewrite_one(const LoadFieldInst& i) {
    const std::string& cls = instrumented_receiver(i.object, "field read");
    LabelOperand obj = label_of_var(i.object);
    emit(i);
    std::string f = temp();
    if (annotated_somewhere(cls, i.field)) {
      emit(InstantiateInst{f, FieldTemplate{i.object, i.field,
                                            FieldTemplateMode::kTaint}});
    } else {
      emit(LoadSlotInst{f, i.object,
                        ctx_.layout->label_slot_for_field(p_, cls, i.field)});
    }
    std::vector<LabelOperand> ops{LabelVar{f}};
    if (i.object != "this") ops.push_back(obj);
    ops.push_back(PcRef{});
    emit(JoinInst{define_label(i.dst), std::move(ops)});
  }

  // (fieldC) when an annotation may apply, (fieldW) when one may not.
  void rewrite_one(const StoreFieldInst& i) {
    const std::string& cls = instrumented_receiver(i.object, "field write");
    std::vector<LabelOperand> ops{label_of(i.value)};
    if (i.object != "this") ops.push_back(label_of_var(i.object));
    ops.push_back(PcRef{});
    std::string v = temp();
    emit(JoinInst{v, std::move(ops)});
    if (annotated_somewhere(cls, i.field)) {
      std::string bound = temp();
      emit(InstantiateInst{bound, FieldTemplate{i.object, i.field,
                                                FieldTemplateMode::kBound}});
      emit(AssertFlowInst{LabelVar{v}, LabelVar{bound},
                          "store to " + cls + "." + i.field});
    }
    emit(i);
    if (!annotated_everywhere(cls, i.field)) {
      std::string slot = ctx_.layout->label_slot_for_field(p_, cls, i.field);
      std::string old = temp(), updated = temp();
      emit(LoadSlotInst{old, i.object, slot});
      emit(JoinInst{updated, {LabelVar{old}, LabelVar{v}}});
      emit(StoreSlotInst{i.object, slot, LabelVar{updated}});
    }
  }

  // (call) for application receivers, (callX) for library ones.
  void rewrite_one(const CallInst& i) {
    const std::string& cls = static_class(i.object);
    LabelOperand obj = label_of_var(i.object);
    std::vector<LabelOperand> args;
    for (const auto& a : i.args) args.push_back(label_of(a));
    if (!is_instrumented_type(p_, cls)) {
      emit(i);
      std::vector<LabelOperand> ops{obj};
      ops.insert(ops.end(), args.begin(), args.end());
      ops.push_back(PcRef{});
      emit(JoinInst{define_label(i.dst), std::move(ops)});
      return;
    }
    for (size_t k = 0; k < args.size(); ++k) {
      std::string t = temp();
      emit(JoinInst{t, {args[k], PcRef{}}});
      emit(StoreSlotInst{i.object, param_slot_name(i.method, k), LabelVar{t}});
    }
    std::string pc_in = temp();
    emit(JoinInst{pc_in, {obj, PcRef{}}});
    emit(StoreSlotInst{i.object, pc_in_slot_name(i.method), LabelVar{pc_in}});
    emit(i);
    for (size_t k = 0; k < i.args.size(); ++k) {
      const Var* v = std::get_if<Var>(&i.args[k]);
      if (!v || v->name == "this") continue;
      emit(LoadSlotInst{define_label(v->name), i.object,
                        param_slot_name(i.method, k)});
    }
    emit(LoadSlotInst{define_label(i.dst), i.object, ret_slot_name(i.method)});
  }

  template <class T>
  void rewrite_one(const T&) {
    throw std::logic_error("unexpected instruction");
  }

  void rewrite_terminator(const Terminator& t) {
    if (const auto* br = std::get_if<BranchInst>(&t)) {
      // (branch)
      LabelOperand cond = label_of_var(br->cond);
      std::string saved = fresh(std::string(kShadowPrefix) + "$oldPC");
      saved_pc_[cur_] = saved;
      emit(SavePcInst{saved});
      emit(SetPcInst{{PcRef{}, cond}});
    } else if (const auto* ret = std::get_if<ReturnInst>(&t)) {
      // (return)
      std::string value = temp();
      emit(JoinInst{value, {label_of(ret->value), PcRef{}}});
      const MethodContracts* mc = contracts();
      if (mc && mc->ret) {
        std::string tmpl = temp();
        emit(InstantiateInst{tmpl, LocalsTemplate{mc->ret->tmpl}});
        if (mc->ret->modifier == Modifier::kCheck) {
          emit(AssertFlowInst{LabelVar{value}, LabelVar{tmpl},
                              "return of " + where()});
        } else {
          value = tmpl;
        }
      }
      emit(StoreSlotInst{"this", ret_slot_name(m_.name), LabelVar{value}});
      for (size_t k = 0; k < m_.params.size(); ++k) {
        emit(StoreSlotInst{"this", param_slot_name(m_.name, k),
                           label_of_var(m_.params[k].name)});
      }
    }
    // (goto) needs no monitor code.
    out_[cur_].terminator = t;
  }

  const InstrumentContext& ctx_;
  const Program& p_;
  const ClassDef& cls_;
  const MethodDef& m_;
  Cfg cfg_;
  DomTree idom_;
  std::vector<BlockPcPlan> plan_;
  TypeMap types_;
  std::set<std::string> used_;
  // Per block, label definitions in emission order: (program var, label var).
  std::vector<std::vector<std::pair<std::string, std::string>>> defs_;
  std::vector<std::optional<std::string>> saved_pc_;
  std::vector<BasicBlock> out_;
  std::vector<PendingPhi> pending_;
  size_t cur_ = 0;
  size_t next_temp_ = 0;
};

}  // namespace

MethodDef rewrite_method(const InstrumentContext& ctx, const ClassDef& cls,
                         const MethodDef& m) {
  return MethodRewriter(ctx, cls, m).run();
}

InstrumentResult instrument_program(const Program& p,
                                    const ResolvedSpecs& specs) {
  auto [out, layout] = inject_shadow_fields(p);
  InstrumentContext ctx{&p, &layout, &specs};
  for (ClassDef& c : out.classes) {
    if (!c.instrumented) continue;
    const ClassDef& orig = *p.find_class(c.name);
    for (MethodDef& m : c.methods) {
      if (m.is_native()) continue;
      m = rewrite_method(ctx, orig, *orig.find_method(m.name));
    }
  }
  out.instrumented = true;
  for (const auto& [key, tmpl] : specs.field_annotations()) {
    out.annotations.push_back(AnnotationMeta{key.first, key.second, tmpl});
  }
  verify_program(out);
  std::string manifest = print_manifest(p, layout);
  return {std::move(out), std::move(layout), std::move(manifest)};
}

Program erase_instrumentation(const Program& p) {
  Program out = p;
  out.instrumented = false;
  out.annotations.clear();
  for (ClassDef& c : out.classes) {
    std::erase_if(c.fields,
                  [](const FieldDef& f) { return f.type == kLabelType; });
    for (MethodDef& m : c.methods) {
      for (BasicBlock& b : m.blocks) std::erase_if(b.body, is_monitor);
    }
  }
  return out;
}

std::optional<std::string> check_pc_discipline(const Program& p) {
  for (const ClassDef& c : p.classes) {
    if (!c.instrumented) continue;
    for (const MethodDef& m : c.methods) {
      if (m.is_native()) continue;
      const std::string where = c.name + "." + m.name;
      Cfg cfg = build_cfg(m);
      DomTree idom = dominators(cfg);
      DomTree ipdom = post_dominators(cfg);
      auto opens = scope_opens(cfg, ipdom, idom);
      std::vector<std::optional<std::string>> saved(cfg.num_blocks());
      for (size_t b = 0; b < cfg.num_blocks(); ++b) {
        const BasicBlock& blk = m.blocks[b];
        size_t saves = 0;
        for (const auto& inst : blk.body) {
          saves += std::holds_alternative<SavePcInst>(inst);
        }
        if (!std::holds_alternative<BranchInst>(blk.terminator)) {
          if (saves) return where + ": block '" + blk.label +
                            "' saves the pc without branching";
          continue;
        }
        const size_t n = blk.body.size();
        const SavePcInst* save =
            n >= 2 ? std::get_if<SavePcInst>(&blk.body[n - 2]) : nullptr;
        const SetPcInst* raise =
            n >= 1 ? std::get_if<SetPcInst>(&blk.body[n - 1]) : nullptr;
        bool raises_from_pc =
            raise && std::any_of(raise->operands.begin(), raise->operands.end(),
                                 [](const LabelOperand& o) {
                                   return std::holds_alternative<PcRef>(o);
                                 });
        if (!save || !raises_from_pc || saves != 1) {
          return where + ": branch in block '" + blk.label +
                 "' is not directly preceded by one pc save and raise";
        }
        saved[b] = save->dst;
      }
      for (size_t l = 0; l < cfg.num_blocks(); ++l) {
        if (!opens[l]) continue;
        const BasicBlock& blk = m.blocks[l];
        const SetPcInst* restore =
            blk.body.empty() ? nullptr : std::get_if<SetPcInst>(&blk.body[0]);
        if (!restore || restore->operands.size() != 1 ||
            restore->operands[0] !=
                LabelOperand(LabelVar{*saved[*opens[l]]})) {
          return where + ": block '" + blk.label +
                 "' does not start by restoring the pc saved in '" +
                 cfg.labels[*opens[l]] + "'";
        }
        // A scope opened inside this one must close no later than it.
        for (size_t l2 = 0; l2 < cfg.num_blocks(); ++l2) {
          if (!opens[l2] || l2 == l) continue;
          size_t d = *opens[l], d2 = *opens[l2];
          bool inside = d != d2 && tree_dominates(idom, d, d2) && d2 != l &&
                        tree_dominates(ipdom, l, d2);
          if (inside && !tree_dominates(ipdom, l, l2)) {
            return where + ": pc scope of '" + cfg.labels[d2] +
                   "' escapes the scope of '" + cfg.labels[d] + "'";
          }
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace sif
