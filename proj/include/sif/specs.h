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

// Security specification files: field label templates and method flow
// contracts for the boundary classes of an application.
//
//   class Associate extends Employee {
//     double:AssociateSL(id) salary;
//   }
//   class EmployeeInfoDispatcher {
//     String:?AssociateSL(requesterId) associateDispatch(long requesterId,
//                                                        long queriedId);
//   }

#ifndef SIF_SPECS_H_
#define SIF_SPECS_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sif/ir.h"
#include "sif/lattice.h"

namespace sif {

enum class Modifier {
  kCheck,  // `?`: leak unless the value's label is below the template
  kSet,    // `!`: the value takes the template label
};

struct FlowContract {
  Modifier modifier = Modifier::kCheck;
  LabelTemplate tmpl;
  friend bool operator==(const FlowContract&, const FlowContract&) = default;
};

struct FieldAnnotation {
  std::string type;
  std::string field;
  LabelTemplate tmpl;
  friend bool operator==(const FieldAnnotation&,
                         const FieldAnnotation&) = default;
};

struct ParamAnnotation {
  std::string type;
  std::string name;
  std::optional<FlowContract> contract;
  friend bool operator==(const ParamAnnotation&,
                         const ParamAnnotation&) = default;
};

struct MethodAnnotation {
  std::string return_type;
  std::string method;
  std::optional<FlowContract> ret;
  std::vector<ParamAnnotation> params;
  friend bool operator==(const MethodAnnotation&,
                         const MethodAnnotation&) = default;
};

struct ClassSpec {
  bool is_abstract = false;
  std::string class_name;
  std::optional<std::string> superclass;
  std::vector<FieldAnnotation> fields;
  std::vector<MethodAnnotation> methods;
  friend bool operator==(const ClassSpec&, const ClassSpec&) = default;
};

std::vector<ClassSpec> parse_specs(std::string_view text);
std::string print_specs(const std::vector<ClassSpec>& specs);

// Contracts of one method, indexed by parameter position.
struct MethodContracts {
  std::vector<std::optional<FlowContract>> params;
  std::optional<FlowContract> ret;
};

class ResolvedSpecs {
 public:
  // Annotation declared for `field` by the spec of exactly `class_name`.
  const LabelTemplate* declared_field_annotation(std::string_view class_name,
                                                 std::string_view field) const;

  // Annotation in force for objects of dynamic class `class_name`: the
  // nearest class in its superclass chain whose spec annotates `field`.
  const LabelTemplate* effective_field_annotation(const Program& p,
                                                  std::string_view class_name,
                                                  std::string_view field) const;

  // Contracts of the method `method` as found from `class_name`.
  const MethodContracts* method_contracts(const Program& p,
                                          std::string_view class_name,
                                          std::string_view method) const;

  const std::map<std::pair<std::string, std::string>, LabelTemplate>&
  field_annotations() const {
    return fields_;
  }
  const std::map<std::pair<std::string, std::string>, MethodContracts>&
  methods() const {
    return methods_;
  }

  void add_field(std::string cls, std::string field, LabelTemplate tmpl) {
    fields_[{std::move(cls), std::move(field)}] = std::move(tmpl);
  }
  void add_method(std::string cls, std::string method, MethodContracts c) {
    methods_[{std::move(cls), std::move(method)}] = std::move(c);
  }

 private:
  std::map<std::pair<std::string, std::string>, LabelTemplate> fields_;
  std::map<std::pair<std::string, std::string>, MethodContracts> methods_;
};

// Resolves class, field, method and parameter names and checks template
// heads and arities against the lattice. Template dependencies must name a
// field of the same object (field annotations) or a parameter of the method
// (method annotations). Throws ValidationError.
ResolvedSpecs resolve_specs(const std::vector<ClassSpec>& specs,
                            const Program& p, const LatticeDef& lat);

// Field annotations of an instrumented program's metadata.
ResolvedSpecs specs_from_annotations(const Program& p);

}  // namespace sif

#endif  // SIF_SPECS_H_
