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

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "sif/lattice.h"
#include "sif/specs.h"
#include "test_support.h"

namespace sif {
namespace {

using testing::corpus_path;
using testing::Env;
using testing::read_file;

struct Corpus {
  Program program = parse_program(read_file(corpus_path("employees.sif")));
  LatticeDef lattice = parse_lattice(read_file(corpus_path("employees.lat")));
};

ResolvedSpecs resolve_text(const std::string& text) {
  Corpus c;
  return resolve_specs(parse_specs(text), c.program, c.lattice);
}

TEST(SpecsParse, FieldAnnotationWithDependency) {
  auto specs = parse_specs(
      "class Supervisor extends Employee { double:SupervisorSL(id) salary; }");
  ASSERT_EQ(specs.size(), 1u);
  EXPECT_EQ(specs[0].superclass, "Employee");
  ASSERT_EQ(specs[0].fields.size(), 1u);
  const FieldAnnotation& f = specs[0].fields[0];
  EXPECT_EQ(f.field, "salary");
  EXPECT_EQ(f.tmpl.head, "SupervisorSL");
  ASSERT_EQ(f.tmpl.args.size(), 1u);
  EXPECT_EQ(std::get<FieldPath>(f.tmpl.args[0]), FieldPath{"id"});
}

TEST(SpecsParse, ReturnContract) {
  auto specs = parse_specs(
      "class EmployeeInfoDispatcher { String:?AssociateSL(requesterId) "
      "associateDispatch(long requesterId, long queriedId); }");
  ASSERT_EQ(specs.size(), 1u);
  ASSERT_EQ(specs[0].methods.size(), 1u);
  const MethodAnnotation& m = specs[0].methods[0];
  ASSERT_TRUE(m.ret.has_value());
  EXPECT_EQ(m.ret->modifier, Modifier::kCheck);
  EXPECT_EQ(std::get<FieldPath>(m.ret->tmpl.args[0]), FieldPath{"requesterId"});
  ASSERT_EQ(m.params.size(), 2u);
  EXPECT_FALSE(m.params[0].contract.has_value());
}

TEST(SpecsParse, EmptyClass) {
  auto specs = parse_specs("class C { }");
  ASSERT_EQ(specs.size(), 1u);
  EXPECT_EQ(specs[0].class_name, "C");
  EXPECT_TRUE(specs[0].fields.empty());
  EXPECT_TRUE(specs[0].methods.empty());
}

TEST(SpecsParse, SetModifierOnParameterAndBottomTop) {
  auto specs = parse_specs(
      "class K { long m(string:!Secret s, long:?F(_, *) t); }");
  const MethodAnnotation& m = specs[0].methods[0];
  EXPECT_FALSE(m.ret.has_value());
  EXPECT_EQ(m.params[0].contract->modifier, Modifier::kSet);
  EXPECT_EQ(m.params[0].contract->tmpl.head, "Secret");
  const auto& args = m.params[1].contract->tmpl.args;
  EXPECT_TRUE(std::holds_alternative<Bottom>(args[0]));
  EXPECT_TRUE(std::holds_alternative<Top>(args[1]));
}

TEST(SpecsParse, RoundTripCorpusFiles) {
  for (const char* name : {"employees.spec", "associate_by_reference.spec"}) {
    auto specs = parse_specs(read_file(corpus_path(name)));
    EXPECT_EQ(parse_specs(print_specs(specs)), specs) << name;
  }
}

TEST(SpecsParse, SyntaxErrorLocation) {
  try {
    parse_specs("class C {\n  long:Public x\n}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location().line, 3);
  }
  EXPECT_THROW(parse_specs("class C { long:%Public x; }"), ParseError);
  EXPECT_THROW(parse_specs("class C { long x; }"), ParseError);
}

TEST(SpecsResolve, CorpusAnnotationsFollowDynamicClass) {
  Corpus c;
  ResolvedSpecs r = resolve_specs(
      parse_specs(read_file(corpus_path("employees.spec"))), c.program,
      c.lattice);
  auto head = [&](const char* cls, const char* f) {
    const LabelTemplate* t = r.effective_field_annotation(c.program, cls, f);
    return t ? to_string(*t) : std::string("-");
  };
  EXPECT_EQ(head("Associate", "salary"), "AssociateSL(id)");
  EXPECT_EQ(head("Supervisor", "salary"), "SupervisorSL(id)");
  EXPECT_EQ(head("Employee", "salary"), "-");
  EXPECT_EQ(head("Associate", "address"), "AssociateSL(_)");
  EXPECT_EQ(head("Supervisor", "pwd"), "Secret");
  EXPECT_EQ(head("Employee", "kind"), "-");
  const MethodContracts* mc =
      r.method_contracts(c.program, "EmployeeInfoDispatcher", "authenticate");
  ASSERT_NE(mc, nullptr);
  EXPECT_EQ(mc->ret->modifier, Modifier::kSet);
  EXPECT_EQ(mc->params.size(), 2u);
}

TEST(SpecsResolve, ObjectKeyedEvaluationDependsOnSupervisor) {
  Corpus c;
  ResolvedSpecs r = resolve_specs(
      parse_specs(read_file(corpus_path("associate_by_reference.spec"))),
      c.program, c.lattice);
  const LabelTemplate* t =
      r.declared_field_annotation("Associate", "evaluation");
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(std::get<FieldPath>(t->args[0]), FieldPath{"supervisor"});
  Label l = instantiate(c.lattice, *t, Env{{"supervisor", ObjectRef{7}}});
  EXPECT_EQ(l, Label::Dep("SupervisorSL", {ObjectRef{7}}));
}

TEST(SpecsResolve, Errors) {
  const char* bad[] = {
      "class Employee { double:Public bonus; }",
      "class Supervisor extends Employee { double:SupervisorSL(id, id) salary; }",
      "class Nobody { }",
      "class Supervisor extends Associate { }",
      "class Supervisor extends Employee { double:Nope salary; }",
      "class Associate extends Employee { double:SupervisorSL(supervisor.id) "
      "evaluation; }",
      "class Associate extends Employee { double:SupervisorSL(bonus) "
      "evaluation; }",
      "class Employee { long:Public(id) id; }",
      "class EmployeeInfoDispatcher { string:?Public nope(); }",
      "class EmployeeInfoDispatcher { string:?AssociateSL(x) "
      "salaryDispatch(long requesterId, long queriedId); }",
      "class EmployeeInfoDispatcher { string salaryDispatch(long a, long b); }",
      "class Employee { long:Public id; long:Public id; }",
      "class Employee { }\nclass Employee { }",
  };
  for (const char* text : bad) {
    EXPECT_THROW(resolve_text(text), ValidationError) << text;
  }
}

// Any resolved field annotation instantiates once its dependencies are set.
TEST(SpecsProperty, FieldTemplatesInstantiateWhenDependenciesSet) {
  Corpus c;
  ResolvedSpecs r = resolve_specs(
      parse_specs(read_file(corpus_path("employees.spec"))), c.program,
      c.lattice);
  std::mt19937 rng(31);
  std::uniform_int_distribution<int64_t> value(-1000, 1000);
  for (const auto& [key, tmpl] : r.field_annotations()) {
    for (int i = 0; i < 25; ++i) {
      int64_t v = value(rng);
      Label l = instantiate(c.lattice, tmpl, [&](const FieldPath&) {
        return std::optional<ParamValue>(v);
      });
      EXPECT_NO_THROW(c.lattice.check_well_formed(l));
      EXPECT_TRUE(leq(c.lattice, l, Label::Secret()));
    }
  }
}

}  // namespace
}  // namespace sif
