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

#include "sif/lattice.h"

#include <algorithm>
#include <set>

namespace sif {

std::string to_string(const ParamValue& p) {
  struct Visitor {
    std::string operator()(const Bottom&) const { return "_"; }
    std::string operator()(const Top&) const { return "*"; }
    std::string operator()(int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return quote(s); }
    std::string operator()(const ObjectRef& r) const {
      return "&" + std::to_string(r.id);
    }
  };
  return std::visit(Visitor{}, p);
}

bool Label::all_params_bottom() const {
  return std::all_of(params_.begin(), params_.end(), is_bottom);
}

bool Label::all_params_top() const {
  return std::all_of(params_.begin(), params_.end(), is_top);
}

std::string to_string(const Label& label) {
  if (!label.is_dep()) return label.name();
  std::string out = label.name() + "(";
  for (size_t i = 0; i < label.params().size(); ++i) {
    if (i) out += ", ";
    out += to_string(label.params()[i]);
  }
  return out + ")";
}

Label parse_label(TokenStream& ts) {
  std::string head = ts.expect_ident("label");
  if (!ts.accept_punct("(")) {
    if (head == "Public") return Label::Public();
    if (head == "Secret") return Label::Secret();
    return Label::Base(head);
  }
  std::vector<ParamValue> params;
  if (!ts.is_punct(")")) {
    do {
      const Token& t = ts.peek();
      if (t.kind == TokenKind::kIdent && t.text == "_") {
        ts.next();
        params.emplace_back(Bottom{});
      } else if (ts.accept_punct("*")) {
        params.emplace_back(Top{});
      } else if (t.kind == TokenKind::kInt) {
        params.emplace_back(ts.next().int_value);
      } else if (t.kind == TokenKind::kString) {
        params.emplace_back(ts.next().text);
      } else if (ts.accept_punct("&")) {
        const Token& id = ts.next();
        if (id.kind != TokenKind::kInt || id.int_value < 0) {
          ts.fail_at(id, "expected object id after '&'");
        }
        params.emplace_back(ObjectRef{static_cast<uint64_t>(id.int_value)});
      } else {
        ts.fail("expected label parameter, found " + describe(t));
      }
    } while (ts.accept_punct(","));
  }
  ts.expect_punct(")");
  if (params.empty()) ts.fail("label family instance needs parameters");
  return Label::Dep(head, std::move(params));
}

Label parse_label(std::string_view text) {
  TokenStream ts(tokenize(text, false));
  Label l = parse_label(ts);
  if (!ts.at_end()) ts.fail("trailing input after label");
  return l;
}

// ---------------------------------------------------------------------------

LatticeDef::LatticeDef() { build(); }

LatticeDef LatticeDef::make(
    std::vector<std::string> base_labels,
    std::vector<std::pair<std::string, size_t>> families,
    std::vector<std::pair<Label, Label>> edges) {
  LatticeDef lat;
  std::set<std::string> names = {"Public", "Secret"};
  for (const auto& b : base_labels) {
    if (!names.insert(b).second) {
      throw ValidationError("redeclaration of label '" + b + "'");
    }
  }
  for (const auto& [f, arity] : families) {
    if (!names.insert(f).second) {
      throw ValidationError("redeclaration of label '" + f + "'");
    }
    if (arity == 0) {
      throw ValidationError("family '" + f + "' must have arity >= 1");
    }
  }
  lat.bases_ = std::move(base_labels);
  lat.families_ = std::move(families);
  lat.edges_ = std::move(edges);
  lat.build();
  return lat;
}

bool LatticeDef::has_base(std::string_view name) const {
  return std::find(bases_.begin(), bases_.end(), name) != bases_.end();
}

std::optional<size_t> LatticeDef::family_arity(std::string_view name) const {
  for (const auto& [f, arity] : families_) {
    if (f == name) return arity;
  }
  return std::nullopt;
}

void LatticeDef::check_well_formed(const Label& label) const {
  switch (label.form()) {
    case Label::Form::kPublic:
    case Label::Form::kSecret:
      return;
    case Label::Form::kBase:
      if (!has_base(label.name())) {
        if (family_arity(label.name())) {
          throw ValidationError("family '" + label.name() +
                                "' used without parameters");
        }
        throw ValidationError("undeclared label '" + label.name() + "'");
      }
      return;
    case Label::Form::kDep: {
      auto arity = family_arity(label.name());
      if (!arity) {
        throw ValidationError("undeclared label family '" + label.name() +
                              "'");
      }
      if (*arity != label.params().size()) {
        throw ValidationError(
            "arity mismatch for '" + label.name() + "': declared " +
            std::to_string(*arity) + ", got " +
            std::to_string(label.params().size()));
      }
      return;
    }
  }
}

size_t LatticeDef::skeleton_index(const Label& l) const {
  for (size_t i = 0; i < skeleton_.size(); ++i) {
    if (skeleton_[i] == l) return i;
  }
  throw ValidationError("not a skeleton label: " + to_string(l));
}

size_t LatticeDef::upper_proxy(const Label& l) const {
  if (!l.is_dep()) return skeleton_index(l);
  size_t arity = l.params().size();
  return l.all_params_bottom()
             ? skeleton_index(Label::FamilyBottom(l.name(), arity))
             : skeleton_index(Label::FamilyTop(l.name(), arity));
}

size_t LatticeDef::lower_proxy(const Label& l) const {
  if (!l.is_dep()) return skeleton_index(l);
  size_t arity = l.params().size();
  return l.all_params_top()
             ? skeleton_index(Label::FamilyTop(l.name(), arity))
             : skeleton_index(Label::FamilyBottom(l.name(), arity));
}

void LatticeDef::build() {
  skeleton_.clear();
  skeleton_.push_back(Label::Public());
  skeleton_.push_back(Label::Secret());
  for (const auto& b : bases_) skeleton_.push_back(Label::Base(b));
  for (const auto& [f, arity] : families_) {
    skeleton_.push_back(Label::FamilyBottom(f, arity));
    skeleton_.push_back(Label::FamilyTop(f, arity));
  }
  const size_t n = skeleton_.size();
  le_.assign(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) {
    le_[i][i] = true;
    le_[0][i] = true;
    le_[i][1] = true;
  }
  for (size_t i = 2 + bases_.size(); i + 1 < n; i += 2) le_[i][i + 1] = true;

  for (const auto& [lo, hi] : edges_) {
    auto endpoint = [&](const Label& l) {
      if (l.is_dep() && !l.all_params_bottom() && !l.all_params_top()) {
        throw ValidationError("order edges must use F(bot) or F(top), got " +
                              to_string(l));
      }
      check_well_formed(l);
      return skeleton_index(l);
    };
    size_t a = endpoint(lo);
    size_t b = endpoint(hi);
    if (a == b) {
      throw ValidationError("cycle in order edges: " + to_string(lo) + " < " +
                            to_string(hi));
    }
    le_[a][b] = true;
  }
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      if (!le_[i][k]) continue;
      for (size_t j = 0; j < n; ++j) {
        if (le_[k][j]) le_[i][j] = true;
      }
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      if (le_[i][j] && le_[j][i]) {
        throw ValidationError("cycle in order edges between " +
                              to_string(skeleton_[i]) + " and " +
                              to_string(skeleton_[j]));
      }
    }
  }
  join_.assign(n, std::vector<size_t>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      std::vector<size_t> upper;
      for (size_t k = 0; k < n; ++k) {
        if (le_[i][k] && le_[j][k]) upper.push_back(k);
      }
      std::optional<size_t> least;
      for (size_t k : upper) {
        bool below_all = std::all_of(upper.begin(), upper.end(),
                                     [&](size_t m) { return le_[k][m]; });
        if (below_all) {
          least = k;
          break;
        }
      }
      if (!least) {
        throw ValidationError("labels " + to_string(skeleton_[i]) + " and " +
                              to_string(skeleton_[j]) +
                              " have no least upper bound");
      }
      join_[i][j] = join_[j][i] = *least;
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

Label parse_ref(TokenStream& ts,
                const std::map<std::string, size_t>& family_arity) {
  const Token& name_tok = ts.peek();
  std::string name = ts.expect_ident("label reference");
  if (ts.accept_punct("(")) {
    const Token& which = ts.peek();
    std::string w = ts.expect_ident("'bot' or 'top'");
    ts.expect_punct(")");
    auto it = family_arity.find(name);
    if (it == family_arity.end()) {
      ts.fail_at(name_tok, "unknown label family '" + name + "'");
    }
    if (w == "bot") return Label::FamilyBottom(name, it->second);
    if (w == "top") return Label::FamilyTop(name, it->second);
    ts.fail_at(which, "expected 'bot' or 'top', found '" + w + "'");
  }
  if (name == "Public") return Label::Public();
  if (name == "Secret") return Label::Secret();
  if (family_arity.count(name)) {
    ts.fail_at(name_tok,
               "family '" + name + "' needs (bot) or (top) in an order edge");
  }
  return Label::Base(name);
}

}  // namespace

LatticeDef parse_lattice(std::string_view text) {
  TokenStream ts(tokenize(text, true));
  std::vector<std::string> bases;
  std::vector<std::pair<std::string, size_t>> families;
  std::map<std::string, size_t> arity;
  std::set<std::string> declared = {"Public", "Secret"};
  std::vector<std::pair<Label, Label>> edges;
  std::vector<Location> edge_locs;

  ts.skip_newlines();
  while (!ts.at_end()) {
    const Token& kw = ts.peek();
    if (ts.accept_ident("label")) {
      const Token& nt = ts.peek();
      std::string name = ts.expect_ident("label name");
      if (!declared.insert(name).second) {
        ts.fail_at(nt, "redeclaration of label '" + name + "'");
      }
      bases.push_back(name);
    } else if (ts.accept_ident("family")) {
      const Token& nt = ts.peek();
      std::string name = ts.expect_ident("family name");
      ts.expect_punct("/");
      const Token& n = ts.next();
      if (n.kind != TokenKind::kInt || n.int_value < 1) {
        ts.fail_at(n, "family arity must be a positive integer");
      }
      if (!declared.insert(name).second) {
        ts.fail_at(nt, "redeclaration of label '" + name + "'");
      }
      families.emplace_back(name, static_cast<size_t>(n.int_value));
      arity[name] = static_cast<size_t>(n.int_value);
    } else if (ts.accept_ident("order")) {
      Label lo = parse_ref(ts, arity);
      ts.expect_punct("<");
      Label hi = parse_ref(ts, arity);
      for (const Label* l : {&lo, &hi}) {
        if (l->form() == Label::Form::kBase && !declared.count(l->name())) {
          ts.fail_at(kw, "unknown label reference '" + l->name() + "'");
        }
      }
      edges.emplace_back(std::move(lo), std::move(hi));
      edge_locs.push_back(kw.loc);
    } else {
      ts.fail("expected 'label', 'family' or 'order', found " +
              describe(ts.peek()));
    }
    ts.expect_newline();
    ts.skip_newlines();
  }
  return LatticeDef::make(std::move(bases), std::move(families),
                          std::move(edges));
}

std::string print_lattice(const LatticeDef& lat) {
  std::string out;
  for (const auto& b : lat.base_labels()) out += "label " + b + "\n";
  for (const auto& [f, arity] : lat.families()) {
    out += "family " + f + "/" + std::to_string(arity) + "\n";
  }
  auto ref = [](const Label& l) {
    if (!l.is_dep()) return l.name();
    return l.name() + (l.all_params_bottom() ? "(bot)" : "(top)");
  };
  for (const auto& [lo, hi] : lat.edges()) {
    out += "order " + ref(lo) + " < " + ref(hi) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool param_leq(const ParamValue& a, const ParamValue& b) {
  return is_bottom(a) || is_top(b) || a == b;
}

ParamValue param_join(const ParamValue& a, const ParamValue& b) {
  if (is_bottom(a)) return b;
  if (is_bottom(b)) return a;
  if (a == b) return a;
  return Top{};
}

}  // namespace

bool leq(const LatticeDef& lat, const Label& a, const Label& b) {
  lat.check_well_formed(a);
  lat.check_well_formed(b);
  if (a.is_public() || b.is_secret()) return true;
  if (a.is_dep() && b.is_dep() && a.name() == b.name()) {
    for (size_t i = 0; i < a.params().size(); ++i) {
      if (!param_leq(a.params()[i], b.params()[i])) return false;
    }
    return true;
  }
  return lat.skeleton_leq(lat.upper_proxy(a), lat.lower_proxy(b));
}

Label join(const LatticeDef& lat, const Label& a, const Label& b) {
  if (leq(lat, a, b)) return b;
  if (leq(lat, b, a)) return a;
  if (a.is_dep() && b.is_dep() && a.name() == b.name()) {
    std::vector<ParamValue> params;
    params.reserve(a.params().size());
    for (size_t i = 0; i < a.params().size(); ++i) {
      params.push_back(param_join(a.params()[i], b.params()[i]));
    }
    return Label::Dep(a.name(), std::move(params));
  }
  return lat.skeleton()[lat.skeleton_join(lat.upper_proxy(a),
                                          lat.upper_proxy(b))];
}

Label join_all(const LatticeDef& lat, const std::vector<Label>& labels) {
  Label acc = Label::Public();
  for (const auto& l : labels) acc = join(lat, acc, l);
  return acc;
}

// ---------------------------------------------------------------------------

std::string to_string(const LabelTemplate& t) {
  std::string out = t.head;
  if (!t.has_parens) return out;
  out += "(";
  for (size_t i = 0; i < t.args.size(); ++i) {
    if (i) out += ", ";
    const auto& a = t.args[i];
    if (std::holds_alternative<Bottom>(a)) {
      out += "_";
    } else if (std::holds_alternative<Top>(a)) {
      out += "*";
    } else {
      const auto& path = std::get<FieldPath>(a);
      for (size_t k = 0; k < path.size(); ++k) {
        if (k) out += ".";
        out += path[k];
      }
    }
  }
  return out + ")";
}

LabelTemplate parse_template(TokenStream& ts) {
  LabelTemplate t;
  t.head = ts.expect_ident("label name");
  if (!ts.accept_punct("(")) return t;
  t.has_parens = true;
  if (!ts.is_punct(")")) {
    do {
      if (ts.accept_punct("*")) {
        t.args.emplace_back(Top{});
      } else if (ts.is_ident("_")) {
        ts.next();
        t.args.emplace_back(Bottom{});
      } else {
        FieldPath path;
        path.push_back(ts.expect_ident("field path, '_' or '*'"));
        while (ts.accept_punct(".")) path.push_back(ts.expect_ident("field"));
        t.args.emplace_back(std::move(path));
      }
    } while (ts.accept_punct(","));
  }
  ts.expect_punct(")");
  return t;
}

LabelTemplate parse_template(std::string_view text) {
  TokenStream ts(tokenize(text, false));
  LabelTemplate t = parse_template(ts);
  if (!ts.at_end()) ts.fail("trailing input after label template");
  return t;
}

Label instantiate(const LatticeDef& lat, const LabelTemplate& tmpl,
                  const DependencyResolver& resolve) {
  if (!tmpl.has_parens) {
    Label l = tmpl.head == "Public"   ? Label::Public()
              : tmpl.head == "Secret" ? Label::Secret()
                                      : Label::Base(tmpl.head);
    lat.check_well_formed(l);
    return l;
  }
  std::vector<ParamValue> params;
  for (const auto& arg : tmpl.args) {
    if (std::holds_alternative<Bottom>(arg)) {
      params.emplace_back(Bottom{});
    } else if (std::holds_alternative<Top>(arg)) {
      params.emplace_back(Top{});
    } else {
      const auto& path = std::get<FieldPath>(arg);
      std::optional<ParamValue> v = resolve(path);
      if (!v) {
        std::string p;
        for (const auto& s : path) p += (p.empty() ? "" : ".") + s;
        throw UnresolvedDependency("unresolved dependency '" + p +
                                   "' in label template " + to_string(tmpl));
      }
      params.push_back(std::move(*v));
    }
  }
  Label l = Label::Dep(tmpl.head, std::move(params));
  lat.check_well_formed(l);
  return l;
}

Label instantiate(const LatticeDef& lat, const LabelTemplate& tmpl,
                  const std::map<std::string, std::optional<ParamValue>>& env) {
  return instantiate(
      lat, tmpl, [&](const FieldPath& path) -> std::optional<ParamValue> {
        if (path.size() != 1) return std::nullopt;
        auto it = env.find(path.front());
        if (it == env.end()) return std::nullopt;
        return it->second;
      });
}

// ---------------------------------------------------------------------------

std::vector<Label> sample_universe(const LatticeDef& lat,
                                   const std::vector<int64_t>& concretes) {
  std::vector<Label> out = lat.skeleton();
  std::vector<ParamValue> choices = {Bottom{}, Top{}};
  for (int64_t c : concretes) choices.emplace_back(c);
  for (const auto& [f, arity] : lat.families()) {
    std::vector<size_t> idx(arity, 0);
    while (true) {
      std::vector<ParamValue> params;
      for (size_t i : idx) params.push_back(choices[i]);
      Label l = Label::Dep(f, std::move(params));
      if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
      size_t k = 0;
      while (k < arity && ++idx[k] == choices.size()) idx[k++] = 0;
      if (k == arity) break;
    }
  }
  return out;
}

std::optional<std::string> check_lattice_laws(
    const LatticeDef& lat, const std::vector<Label>& universe) {
  const size_t n = universe.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) le[i][j] = leq(lat, universe[i], universe[j]);
  }
  auto s = [&](size_t i) { return to_string(universe[i]); };
  for (size_t i = 0; i < n; ++i) {
    if (!le[i][i]) return "reflexivity fails for " + s(i);
    if (!leq(lat, Label::Public(), universe[i]))
      return "Public is not below " + s(i);
    if (!leq(lat, universe[i], Label::Secret()))
      return s(i) + " is not below Secret";
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i != j && le[i][j] && le[j][i]) {
        return "antisymmetry fails for " + s(i) + " and " + s(j);
      }
      for (size_t k = 0; k < n; ++k) {
        if (le[i][j] && le[j][k] && !le[i][k]) {
          return "transitivity fails for " + s(i) + " <= " + s(j) + " <= " +
                 s(k);
        }
      }
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      const Label& a = universe[i];
      const Label& b = universe[j];
      Label ab = join(lat, a, b);
      if (!leq(lat, a, ab) || !leq(lat, b, ab)) {
        return "join(" + s(i) + ", " + s(j) + ") = " + to_string(ab) +
               " is not an upper bound";
      }
      for (size_t k = 0; k < n; ++k) {
        if (le[i][k] && le[j][k] && !leq(lat, ab, universe[k])) {
          return "join(" + s(i) + ", " + s(j) + ") = " + to_string(ab) +
                 " is not below upper bound " + s(k);
        }
      }
      if (!(join(lat, b, a) == ab)) {
        return "join is not commutative on " + s(i) + ", " + s(j);
      }
      if (i == j && !(ab == a)) return "join is not idempotent on " + s(i);
      for (size_t k = 0; k < n; ++k) {
        const Label& c = universe[k];
        if (!(join(lat, ab, c) == join(lat, a, join(lat, b, c)))) {
          return "join is not associative on " + s(i) + ", " + s(j) + ", " +
                 s(k);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace sif
