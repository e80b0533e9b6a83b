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

#include <algorithm>
#include <random>
#include <string>

#include "sif/instrument.h"
#include "sif/ir.h"
#include "sif/specs.h"
#include "test_support.h"

namespace sif {
namespace {

using testing::corpus_path;
using testing::normalized_method;
using testing::read_file;

Program load(const std::string& name) {
  return parse_program(read_file(corpus_path(name)));
}

ResolvedSpecs corpus_specs(const Program& p) {
  return resolve_specs(parse_specs(read_file(corpus_path("employees.spec"))), p,
                       parse_lattice(read_file(corpus_path("employees.lat"))));
}

const MethodDef& method(const Program& p, const std::string& cls,
                        const std::string& m) {
  return *p.find_class(cls)->find_method(m);
}

std::vector<std::string> field_names(const ClassDef& c) {
  std::vector<std::string> out;
  for (const auto& f : c.fields) out.push_back(f.type + " " + f.name);
  return out;
}

size_t count_kind(const MethodDef& m, auto pred) {
  size_t n = 0;
  for (const auto& b : m.blocks) {
    n += std::count_if(b.body.begin(), b.body.end(), pred);
  }
  return n;
}

TEST(InstrumentGolden, MethodAMatchesHandWrittenRewrite) {
  Program expected = load("golden/example.instrumented.sif");
  InstrumentResult r = instrument_program(load("example.sif"), ResolvedSpecs{});
  EXPECT_TRUE(r.program.instrumented);
  const ClassDef& got = *r.program.find_class("Example");
  const ClassDef& want = *expected.find_class("Example");
  EXPECT_EQ(field_names(got), field_names(want));
  for (const char* m : {"methodA", "methodB"}) {
    EXPECT_EQ(normalized_method(*got.find_method(m)),
              normalized_method(*want.find_method(m)))
        << m;
  }
}

TEST(InstrumentGolden, NormalizationKeepsStructure) {
  Program expected = load("golden/example.instrumented.sif");
  MethodDef m = method(expected, "Example", "methodA");
  std::string base = normalized_method(m);
  // Swapping the two parameter loads changes which slot feeds which label.
  MethodDef swapped = m;
  std::swap(swapped.blocks[0].body[0], swapped.blocks[0].body[1]);
  EXPECT_NE(normalized_method(swapped), base);
  // Dropping the restore is visible.
  MethodDef no_restore = m;
  no_restore.blocks[3].body.erase(no_restore.blocks[3].body.begin());
  EXPECT_NE(normalized_method(no_restore), base);
}

TEST(InstrumentLayout, SlotsAndManifest) {
  auto [p, layout] = inject_shadow_fields(load("example.sif"));
  const ClassShadow& s = layout.classes.at("Example");
  EXPECT_TRUE(s.has_object_slot);
  ASSERT_EQ(s.field_slots.size(), 1u);
  EXPECT_EQ(s.field_slots[0].second, "secLbl$field0");
  ASSERT_EQ(s.method_slots.size(), 2u);
  ASSERT_EQ(s.method_slots[0].first, "methodA");
  const MethodSlots& ms = s.method_slots[0].second;
  EXPECT_EQ(ms.params, (std::vector<std::string>{"secLbl$methodA$p0",
                                                 "secLbl$methodA$p1"}));
  EXPECT_EQ(ms.ret, "secLbl$methodA$ret");
  EXPECT_EQ(ms.pc_in, "secLbl$methodA$pcIn");
  EXPECT_EQ(print_manifest(p, layout),
            "Example\tobject\t-\tsecLbl$this\n"
            "Example\tfield\tfield0\tsecLbl$field0\n"
            "Example\tparam\tmethodA\tsecLbl$methodA$p0\n"
            "Example\tparam\tmethodA\tsecLbl$methodA$p1\n"
            "Example\tret\tmethodA\tsecLbl$methodA$ret\n"
            "Example\tpcIn\tmethodA\tsecLbl$methodA$pcIn\n"
            "Example\tparam\tmethodB\tsecLbl$methodB$p0\n"
            "Example\tret\tmethodB\tsecLbl$methodB$ret\n"
            "Example\tpcIn\tmethodB\tsecLbl$methodB$pcIn\n");
}

TEST(InstrumentLayout, ObjectSlotOnlyOnRootClasses) {
  Program p = load("employees.sif");
  auto [q, layout] = inject_shadow_fields(p);
  EXPECT_TRUE(layout.classes.at("Employee").has_object_slot);
  EXPECT_FALSE(layout.classes.at("Associate").has_object_slot);
  EXPECT_EQ(layout.classes.count("Text"), 0u);
  // Instrumented-typed fields use the holder's object slot.
  EXPECT_EQ(layout.label_slot_for_field(q, "Associate", "supervisor"),
            "secLbl$this");
  EXPECT_EQ(layout.label_slot_for_field(q, "Associate", "salary"),
            "secLbl$salary");
}

TEST(InstrumentLayout, CollisionIsRejected) {
  Program p = parse_program_syntax(
      "class C {\n  long secLbl$x;\n}\n");
  EXPECT_THROW(instrument_program(p, ResolvedSpecs{}), ValidationError);
  Program q = parse_program_syntax(
      "class C {\n  long secLbl$m() {\n  entry:\n    return 1\n  }\n}\n");
  EXPECT_THROW(instrument_program(q, ResolvedSpecs{}), ValidationError);
}

TEST(InstrumentRules, InputMustBePlain) {
  InstrumentResult r = instrument_program(load("example.sif"), ResolvedSpecs{});
  EXPECT_THROW(instrument_program(r.program, ResolvedSpecs{}), Error);
}

TEST(InstrumentRules, LibraryFieldAccessRejected) {
  Program p = parse_program(
      "library class L {\n  long n;\n}\nclass C {\n  long f(L l) {\n  entry:\n"
      "    x = l.n\n    return x\n  }\n}\n");
  EXPECT_THROW(instrument_program(p, ResolvedSpecs{}), ValidationError);
}

TEST(InstrumentRules, AnnotatedStoresAreChecked) {
  Program p = load("employees.sif");
  InstrumentResult r = instrument_program(p, corpus_specs(p));
  const MethodDef& add = method(r.program, "EmployeeInfoDispatcher",
                                "addAssociate");
  // Stores to id, name, address, salary, pwd, supervisorId, evaluation
  // are annotated somewhere in the hierarchy; kind is not.
  EXPECT_EQ(count_kind(add, [](const Instruction& i) {
              return std::holds_alternative<AssertFlowInst>(i);
            }),
            7u);
  // The unannotated `kind` keeps its slot updated.
  EXPECT_EQ(count_kind(add, [](const Instruction& i) {
              const auto* s = std::get_if<StoreSlotInst>(&i);
              return s && s->slot == "secLbl$kind";
            }),
            1u);
  // Return contracts assert at the return.
  const MethodDef& pub = method(r.program, "EmployeeInfoDispatcher",
                                "publicDispatch");
  EXPECT_EQ(count_kind(pub, [](const Instruction& i) {
              const auto* a = std::get_if<AssertFlowInst>(&i);
              return a && a->reason ==
                              "return of EmployeeInfoDispatcher.publicDispatch";
            }),
            1u);
}

TEST(InstrumentRules, PhiInputsCarryPredecessorPc) {
  Program p = parse_program(
      "class C {\n  long f(bool h) {\n  entry:\n    if h goto T\n"
      "    goto M\n  T:\n    goto M\n  M:\n    r = phi [entry$ft: 0, T: 1]\n"
      "    return r\n  }\n}\n");
  InstrumentResult r = instrument_program(p, ResolvedSpecs{});
  const MethodDef& m = method(r.program, "C", "f");
  const PhiLabelInst* phi = nullptr;
  for (const auto& i : m.blocks[3].body) {
    if (const auto* x = std::get_if<PhiLabelInst>(&i); x && x->dst) phi = x;
  }
  ASSERT_NE(phi, nullptr);
  for (const auto& [pred, op] : phi->incoming) {
    const auto* v = std::get_if<LabelVar>(&op);
    ASSERT_NE(v, nullptr) << pred;
    const BasicBlock* b = nullptr;
    for (const auto& blk : m.blocks) {
      if (blk.label == pred) b = &blk;
    }
    bool joined_with_pc = false;
    for (const auto& i : b->body) {
      const auto* j = std::get_if<JoinInst>(&i);
      if (!j || j->dst != v->name) continue;
      joined_with_pc = std::any_of(
          j->operands.begin(), j->operands.end(),
          [](const LabelOperand& o) { return std::holds_alternative<PcRef>(o); });
    }
    EXPECT_TRUE(joined_with_pc) << pred;
  }
}

TEST(InstrumentRules, NestedDiamondRestoresPerScope) {
  Program p = parse_program(
      "class C {\n  long f(bool c, bool d) {\n  entry:\n    if c goto R\n"
      "  L:\n    if d goto L2\n  L1:\n    goto LM\n  L2:\n    goto LM\n"
      "  LM:\n    goto M\n  R:\n    goto M\n  M:\n    return 1\n  }\n}\n");
  InstrumentResult r = instrument_program(p, ResolvedSpecs{});
  const MethodDef& m = method(r.program, "C", "f");
  auto saved_in = [&](const std::string& label) {
    for (const auto& b : m.blocks) {
      if (b.label != label) continue;
      for (const auto& i : b.body) {
        if (const auto* s = std::get_if<SavePcInst>(&i)) return s->dst;
      }
    }
    return std::string("?");
  };
  auto restore_of = [&](const std::string& label) {
    for (const auto& b : m.blocks) {
      if (b.label != label) continue;
      const auto* s = std::get_if<SetPcInst>(&b.body.front());
      if (s && s->operands.size() == 1) {
        if (const auto* v = std::get_if<LabelVar>(&s->operands[0])) {
          return v->name;
        }
      }
    }
    return std::string("none");
  };
  EXPECT_EQ(restore_of("LM"), saved_in("L"));
  EXPECT_EQ(restore_of("M"), saved_in("entry"));
  EXPECT_NE(saved_in("L"), saved_in("entry"));
  EXPECT_EQ(check_pc_discipline(r.program), std::nullopt);
}

TEST(InstrumentProperty, CorpusOutputIsValidAndErasable) {
  Program p = load("employees.sif");
  InstrumentResult r = instrument_program(p, corpus_specs(p));
  EXPECT_NO_THROW(verify_program(r.program));
  EXPECT_EQ(parse_program(print_program(r.program)), r.program);
  EXPECT_EQ(check_pc_discipline(r.program), std::nullopt);
  EXPECT_EQ(erase_instrumentation(r.program), p);
  // Deterministic.
  EXPECT_EQ(print_program(instrument_program(p, corpus_specs(p)).program),
            print_program(r.program));
}

TEST(InstrumentProperty, RandomControlFlow) {
  std::mt19937 rng(404);
  for (int i = 0; i < 200; ++i) {
    std::string text = testing::random_method_text(rng, 8);
    Program p = parse_program(text);
    InstrumentResult r = instrument_program(p, ResolvedSpecs{});
    ASSERT_NO_THROW(verify_program(r.program)) << text;
    ASSERT_EQ(check_pc_discipline(r.program), std::nullopt) << text;
    ASSERT_EQ(erase_instrumentation(r.program), p) << text;
  }
}

TEST(InstrumentProperty, PcDisciplineCheckerRejectsMissingRestore) {
  InstrumentResult r = instrument_program(load("example.sif"), ResolvedSpecs{});
  Program broken = r.program;
  auto& body = broken.find_class("Example")->methods[0].blocks[3].body;
  ASSERT_TRUE(std::holds_alternative<SetPcInst>(body.front()));
  body.erase(body.begin());
  EXPECT_NE(check_pc_discipline(broken), std::nullopt);
}

}  // namespace
}  // namespace sif
