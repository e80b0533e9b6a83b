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

#include "sif/specs.h"

#include <set>

namespace sif {

namespace {

std::optional<FlowContract> parse_contract(TokenStream& ts) {
  if (!ts.accept_punct(":")) return std::nullopt;
  FlowContract c;
  if (ts.accept_punct("?")) {
    c.modifier = Modifier::kCheck;
  } else if (ts.accept_punct("!")) {
    c.modifier = Modifier::kSet;
  } else {
    ts.fail("expected '?' or '!' before a method label, found " +
            describe(ts.peek()));
  }
  c.tmpl = parse_template(ts);
  return c;
}

ClassSpec parse_class_spec(TokenStream& ts) {
  ClassSpec spec;
  if (ts.accept_ident("abstract")) spec.is_abstract = true;
  ts.expect_keyword("class");
  spec.class_name = ts.expect_ident("class name");
  if (ts.accept_ident("extends")) spec.superclass = ts.expect_ident("class name");
  ts.expect_punct("{");
  while (!ts.accept_punct("}")) {
    if (ts.at_end()) ts.fail("unterminated class spec '" + spec.class_name + "'");
    std::string type = ts.expect_ident("type");
    bool method_contract = ts.is_punct(":") &&
                           (ts.is_punct("?", 1) || ts.is_punct("!", 1));
    if (ts.is_punct(":") && !method_contract) {
      ts.next();
      FieldAnnotation f;
      f.type = std::move(type);
      f.tmpl = parse_template(ts);
      f.field = ts.expect_ident("field name");
      ts.expect_punct(";");
      spec.fields.push_back(std::move(f));
      continue;
    }
    MethodAnnotation m;
    m.return_type = std::move(type);
    m.ret = parse_contract(ts);
    m.method = ts.expect_ident("method name");
    ts.expect_punct("(");
    if (!ts.is_punct(")")) {
      do {
        ParamAnnotation prm;
        prm.type = ts.expect_ident("parameter type");
        prm.contract = parse_contract(ts);
        prm.name = ts.expect_ident("parameter name");
        m.params.push_back(std::move(prm));
      } while (ts.accept_punct(","));
    }
    ts.expect_punct(")");
    ts.expect_punct(";");
    spec.methods.push_back(std::move(m));
  }
  return spec;
}

std::string contract_to_string(const std::optional<FlowContract>& c) {
  if (!c) return "";
  return std::string(":") + (c->modifier == Modifier::kCheck ? "?" : "!") +
         to_string(c->tmpl);
}

}  // namespace

std::vector<ClassSpec> parse_specs(std::string_view text) {
  TokenStream ts(tokenize(text, false));
  std::vector<ClassSpec> out;
  while (!ts.at_end()) out.push_back(parse_class_spec(ts));
  return out;
}

std::string print_specs(const std::vector<ClassSpec>& specs) {
  std::string out;
  for (const auto& s : specs) {
    if (!out.empty()) out += "\n";
    if (s.is_abstract) out += "abstract ";
    out += "class " + s.class_name;
    if (s.superclass) out += " extends " + *s.superclass;
    out += " {\n";
    for (const auto& f : s.fields) {
      out += "  " + f.type + ":" + to_string(f.tmpl) + " " + f.field + ";\n";
    }
    for (const auto& m : s.methods) {
      out += "  " + m.return_type + contract_to_string(m.ret) + " " + m.method +
             "(";
      for (size_t i = 0; i < m.params.size(); ++i) {
        if (i) out += ", ";
        out += m.params[i].type + contract_to_string(m.params[i].contract) +
               " " + m.params[i].name;
      }
      out += ");\n";
    }
    out += "}\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

const LabelTemplate* ResolvedSpecs::declared_field_annotation(
    std::string_view class_name, std::string_view field) const {
  auto it = fields_.find({std::string(class_name), std::string(field)});
  return it == fields_.end() ? nullptr : &it->second;
}

const LabelTemplate* ResolvedSpecs::effective_field_annotation(
    const Program& p, std::string_view class_name,
    std::string_view field) const {
  for (const ClassDef* c : class_chain(p, class_name)) {
    if (const LabelTemplate* t = declared_field_annotation(c->name, field)) {
      return t;
    }
  }
  return nullptr;
}

const MethodContracts* ResolvedSpecs::method_contracts(
    const Program& p, std::string_view class_name,
    std::string_view method) const {
  for (const ClassDef* c : class_chain(p, class_name)) {
    auto it = methods_.find({c->name, std::string(method)});
    if (it != methods_.end()) return &it->second;
  }
  return nullptr;
}

namespace {

void check_template(const LabelTemplate& t, const LatticeDef& lat,
                    const std::string& where,
                    const std::set<std::string>& scope,
                    const std::string& scope_kind) {
  if (auto arity = lat.family_arity(t.head)) {
    if (!t.has_parens || t.args.size() != *arity) {
      throw ValidationError(where + ": arity mismatch for '" + t.head +
                            "': declared " + std::to_string(*arity) +
                            ", got " + std::to_string(t.args.size()));
    }
  } else if (t.head == "Public" || t.head == "Secret" || lat.has_base(t.head)) {
    if (t.has_parens) {
      throw ValidationError(where + ": label '" + t.head +
                            "' takes no parameters");
    }
  } else {
    throw ValidationError(where + ": unknown label '" + t.head + "'");
  }
  for (const auto& arg : t.args) {
    const auto* path = std::get_if<FieldPath>(&arg);
    if (!path) continue;
    if (path->size() != 1) {
      std::string p;
      for (const auto& s : *path) p += (p.empty() ? "" : ".") + s;
      throw ValidationError(where + ": dependency '" + p +
                            "' refers to a foreign object; dependencies must "
                            "belong to the same object");
    }
    if (!scope.count(path->front())) {
      throw ValidationError(where + ": dependency '" + path->front() +
                            "' is not a " + scope_kind);
    }
  }
}

}  // namespace

ResolvedSpecs resolve_specs(const std::vector<ClassSpec>& specs,
                            const Program& p, const LatticeDef& lat) {
  ResolvedSpecs out;
  std::set<std::string> seen;
  for (const auto& spec : specs) {
    const ClassDef* cls = p.find_class(spec.class_name);
    if (!cls) {
      throw ValidationError("spec for unknown class '" + spec.class_name + "'");
    }
    if (!seen.insert(spec.class_name).second) {
      throw ValidationError("duplicate spec for class '" + spec.class_name + "'");
    }
    if (spec.superclass && cls->superclass != spec.superclass) {
      throw ValidationError("spec says class '" + spec.class_name +
                            "' extends '" + *spec.superclass +
                            "', but the program disagrees");
    }
    std::set<std::string> field_scope;
    for (const auto& f : all_fields(p, spec.class_name)) {
      if (f.type != kLabelType) field_scope.insert(f.name);
    }
    for (const auto& fa : spec.fields) {
      std::string where = spec.class_name + "." + fa.field;
      if (!field_scope.count(fa.field)) {
        throw ValidationError("spec names unknown field '" + where + "'");
      }
      if (out.declared_field_annotation(spec.class_name, fa.field)) {
        throw ValidationError("field '" + where + "' annotated twice");
      }
      check_template(fa.tmpl, lat, where, field_scope, "field of the same object");
      out.add_field(spec.class_name, fa.field, fa.tmpl);
    }
    for (const auto& ma : spec.methods) {
      std::string where = spec.class_name + "." + ma.method;
      auto ml = lookup_method(p, spec.class_name, ma.method);
      if (!ml) throw ValidationError("spec names unknown method '" + where + "'");
      const MethodDef& m = *ml->method;
      std::set<std::string> param_scope;
      for (const auto& prm : m.params) param_scope.insert(prm.name);
      MethodContracts contracts;
      contracts.params.resize(m.params.size());
      for (const auto& pa : ma.params) {
        size_t idx = 0;
        while (idx < m.params.size() && m.params[idx].name != pa.name) ++idx;
        if (idx == m.params.size()) {
          throw ValidationError("spec names unknown parameter '" + pa.name +
                                "' of '" + where + "'");
        }
        if (pa.contract) {
          check_template(pa.contract->tmpl, lat, where + "(" + pa.name + ")",
                         param_scope, "parameter of the method");
          contracts.params[idx] = pa.contract;
        }
      }
      if (ma.ret) {
        check_template(ma.ret->tmpl, lat, where + " return", param_scope,
                       "parameter of the method");
        contracts.ret = ma.ret;
      }
      out.add_method(ml->owner->name, ma.method, std::move(contracts));
    }
  }
  return out;
}

ResolvedSpecs specs_from_annotations(const Program& p) {
  ResolvedSpecs out;
  for (const auto& a : p.annotations) out.add_field(a.class_name, a.field, a.tmpl);
  return out;
}

}  // namespace sif
