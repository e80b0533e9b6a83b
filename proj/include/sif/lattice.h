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

// Dependent security labels over a user-declared join-semilattice.
//
// A lattice file declares base labels, dependent label families with an
// arity, and order edges between "skeleton" labels: Public, Secret, every
// base label and, for each family F, F(bot) and F(top). Family instances
// F(p1..pn) carry one parameter per position; a parameter is bottom (`_`),
// top (`*`) or a concrete int, string or object identity. Instances of one
// family are ordered componentwise; a concrete parameter is only related to
// itself. Against labels outside its family an instance is approximated by
// the skeleton interval [F(bot), F(top)].

#ifndef SIF_LATTICE_H_
#define SIF_LATTICE_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sif/lexer.h"

namespace sif {

struct Bottom {
  auto operator<=>(const Bottom&) const = default;
};
struct Top {
  auto operator<=>(const Top&) const = default;
};
// Opaque object identity; compared by token only.
struct ObjectRef {
  uint64_t id = 0;
  auto operator<=>(const ObjectRef&) const = default;
};

using ParamValue = std::variant<Bottom, Top, int64_t, std::string, ObjectRef>;

inline bool is_bottom(const ParamValue& p) {
  return std::holds_alternative<Bottom>(p);
}
inline bool is_top(const ParamValue& p) {
  return std::holds_alternative<Top>(p);
}

std::string to_string(const ParamValue& p);

class Label {
 public:
  enum class Form { kPublic, kSecret, kBase, kDep };

  Label() = default;  // Public

  static Label Public() { return Label(); }
  static Label Secret() { return Label(Form::kSecret, "Secret", {}); }
  static Label Base(std::string name) {
    return Label(Form::kBase, std::move(name), {});
  }
  static Label Dep(std::string family, std::vector<ParamValue> params) {
    return Label(Form::kDep, std::move(family), std::move(params));
  }
  // F(bot) / F(top) skeleton instances.
  static Label FamilyBottom(std::string family, size_t arity) {
    return Dep(std::move(family), std::vector<ParamValue>(arity, Bottom{}));
  }
  static Label FamilyTop(std::string family, size_t arity) {
    return Dep(std::move(family), std::vector<ParamValue>(arity, Top{}));
  }

  Form form() const { return form_; }
  const std::string& name() const { return name_; }
  const std::vector<ParamValue>& params() const { return params_; }

  bool is_public() const { return form_ == Form::kPublic; }
  bool is_secret() const { return form_ == Form::kSecret; }
  bool is_dep() const { return form_ == Form::kDep; }
  bool all_params_bottom() const;
  bool all_params_top() const;

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label& a, const Label& b) {
    if (auto c = a.form_ <=> b.form_; c != 0) return c;
    if (auto c = a.name_ <=> b.name_; c != 0) return c;
    return a.params_ <=> b.params_;
  }

 private:
  Label(Form form, std::string name, std::vector<ParamValue> params)
      : form_(form), name_(std::move(name)), params_(std::move(params)) {}

  Form form_ = Form::kPublic;
  std::string name_ = "Public";
  std::vector<ParamValue> params_;
};

// Textual form: Public, Secret, Name, F(_), F(*), F(7), F("s"), F(&3).
std::string to_string(const Label& label);

// Reads a label in the textual form above. Syntax only; use
// LatticeDef::check_well_formed for arity and declaration checks.
Label parse_label(TokenStream& ts);
Label parse_label(std::string_view text);

class LatticeDef {
 public:
  // Only Public and Secret.
  LatticeDef();

  // Builds and validates a lattice. Edges are strict order edges between
  // skeleton labels.
  static LatticeDef make(std::vector<std::string> base_labels,
                         std::vector<std::pair<std::string, size_t>> families,
                         std::vector<std::pair<Label, Label>> edges);

  const std::vector<std::string>& base_labels() const { return bases_; }
  const std::vector<std::pair<std::string, size_t>>& families() const {
    return families_;
  }
  const std::vector<std::pair<Label, Label>>& edges() const { return edges_; }

  bool has_base(std::string_view name) const;
  std::optional<size_t> family_arity(std::string_view name) const;

  // Throws ValidationError for undeclared names or arity mismatch.
  void check_well_formed(const Label& label) const;

  // The finite skeleton, in declaration order: Public, Secret, bases,
  // then F(bot), F(top) per family.
  const std::vector<Label>& skeleton() const { return skeleton_; }

  // Reflexive-transitive order between skeleton labels.
  bool skeleton_leq(size_t a, size_t b) const { return le_[a][b]; }
  size_t skeleton_join(size_t a, size_t b) const { return join_[a][b]; }
  size_t skeleton_index(const Label& skeleton_label) const;

  // Skeleton approximations of a label: the least skeleton label above it
  // and the greatest skeleton label below it.
  size_t upper_proxy(const Label& label) const;
  size_t lower_proxy(const Label& label) const;

 private:
  void build();

  std::vector<std::string> bases_;
  std::vector<std::pair<std::string, size_t>> families_;
  std::vector<std::pair<Label, Label>> edges_;
  std::vector<Label> skeleton_;
  std::vector<std::vector<bool>> le_;
  std::vector<std::vector<size_t>> join_;
};

LatticeDef parse_lattice(std::string_view text);
std::string print_lattice(const LatticeDef& lat);

bool leq(const LatticeDef& lat, const Label& a, const Label& b);
Label join(const LatticeDef& lat, const Label& a, const Label& b);

// Joins a list of labels; Public for an empty list.
Label join_all(const LatticeDef& lat, const std::vector<Label>& labels);

// ---------------------------------------------------------------------------
// Label templates: `Head`, `Family(path, _, *)` where a path names a field of
// the annotated object (or a method parameter).

using FieldPath = std::vector<std::string>;

using TemplateArg = std::variant<FieldPath, Bottom, Top>;

struct LabelTemplate {
  std::string head;
  std::vector<TemplateArg> args;
  bool has_parens = false;

  friend bool operator==(const LabelTemplate&, const LabelTemplate&) = default;
};

std::string to_string(const LabelTemplate& t);
LabelTemplate parse_template(TokenStream& ts);
LabelTemplate parse_template(std::string_view text);

// Looks up the value a field path denotes; nullopt when unset.
using DependencyResolver =
    std::function<std::optional<ParamValue>(const FieldPath&)>;

// Throws UnresolvedDependency for unset dependencies and ValidationError
// for templates that do not fit the lattice.
Label instantiate(const LatticeDef& lat, const LabelTemplate& tmpl,
                  const DependencyResolver& resolve);
Label instantiate(const LatticeDef& lat, const LabelTemplate& tmpl,
                  const std::map<std::string, std::optional<ParamValue>>& env);

// ---------------------------------------------------------------------------
// Law checking.

// Skeleton plus every family instance whose parameters range over
// {_, *, c} for the given concretes.
std::vector<Label> sample_universe(const LatticeDef& lat,
                                   const std::vector<int64_t>& concretes);

// Verifies partial-order and least-upper-bound laws (and commutativity,
// associativity, idempotence of join) exhaustively over `universe`.
// Returns a description of the first violation, or nullopt.
std::optional<std::string> check_lattice_laws(
    const LatticeDef& lat, const std::vector<Label>& universe);

}  // namespace sif

#endif  // SIF_LATTICE_H_
