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

#include <utility>

#include "sif/ir.h"

namespace sif {

namespace {

bool is_shadow_name(std::string_view name) {
  return name.substr(0, kShadowPrefix.size()) == kShadowPrefix;
}

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view text)
      : ts_(tokenize(text, /*keep_newlines=*/true)) {}

  Program parse() {
    Program p;
    ts_.skip_newlines();
    while (!ts_.at_end()) {
      if (ts_.accept_punct("@")) {
        std::string directive = ts_.expect_ident("directive");
        if (directive == "instrumented") {
          p.instrumented = true;
        } else if (directive == "annotation") {
          AnnotationMeta a;
          a.class_name = ts_.expect_ident("class name");
          ts_.expect_punct(".");
          a.field = ts_.expect_ident("field name");
          a.tmpl = parse_template(ts_);
          p.annotations.push_back(std::move(a));
        } else {
          ts_.fail("unknown directive '@" + directive + "'");
        }
        ts_.expect_newline();
      } else if (ts_.accept_ident("entry")) {
        std::string cls = ts_.expect_ident("class name");
        ts_.expect_punct(".");
        std::string m = ts_.expect_ident("method name");
        p.entry = cls + "." + m;
        ts_.expect_newline();
      } else {
        p.classes.push_back(parse_class());
      }
      ts_.skip_newlines();
    }
    return p;
  }

 private:
  ClassDef parse_class() {
    ClassDef c;
    if (ts_.accept_ident("library")) c.instrumented = false;
    ts_.expect_keyword("class");
    c.name = ts_.expect_ident("class name");
    if (ts_.accept_ident("extends")) c.superclass = ts_.expect_ident("class name");
    ts_.expect_punct("{");
    ts_.skip_newlines();
    while (!ts_.accept_punct("}")) {
      if (ts_.at_end()) ts_.fail("unterminated class '" + c.name + "'");
      std::string type = ts_.expect_ident("type");
      std::string name = ts_.expect_ident("member name");
      if (ts_.accept_punct(";")) {
        c.fields.push_back(FieldDef{type, name});
      } else if (ts_.is_punct("(")) {
        c.methods.push_back(parse_method(std::move(type), std::move(name)));
      } else {
        ts_.fail("expected ';' or '(' after member name, found " +
                 describe(ts_.peek()));
      }
      ts_.skip_newlines();
    }
    ts_.expect_newline();
    return c;
  }

  MethodDef parse_method(std::string return_type, std::string name) {
    MethodDef m;
    m.name = std::move(name);
    m.return_type = std::move(return_type);
    ts_.expect_punct("(");
    if (!ts_.is_punct(")")) {
      do {
        Param prm;
        prm.type = ts_.expect_ident("parameter type");
        prm.name = ts_.expect_ident("parameter name");
        m.params.push_back(std::move(prm));
      } while (ts_.accept_punct(","));
    }
    ts_.expect_punct(")");
    if (ts_.accept_punct(";")) return m;  // native
    ts_.expect_punct("{");
    ts_.expect_newline();
    ts_.skip_newlines();

    std::optional<BasicBlock> current;
    bool need_label = true;
    std::string previous_label;
    while (!ts_.is_punct("}")) {
      if (ts_.at_end()) ts_.fail("unterminated method '" + m.name + "'");
      if (ts_.peek().kind == TokenKind::kIdent && ts_.is_punct(":", 1)) {
        if (current) {
          ts_.fail("block '" + current->label + "' has no terminator");
        }
        current.emplace();
        current->label = ts_.next().text;
        ts_.next();
        ts_.expect_newline();
        ts_.skip_newlines();
        need_label = false;
        continue;
      }
      if (!current) {
        if (need_label && !m.blocks.empty()) {
          ts_.fail("instruction after a terminator must start a new labelled "
                   "block");
        }
        current.emplace();
        current->label =
            m.blocks.empty() ? std::string("entry") : previous_label + "$ft";
      }
      std::optional<Terminator> term = parse_line(*current);
      ts_.expect_newline();
      ts_.skip_newlines();
      if (term) {
        current->terminator = std::move(*term);
        previous_label = current->label;
        // An unlabelled block may only follow a conditional branch.
        need_label = !std::holds_alternative<BranchInst>(current->terminator);
        m.blocks.push_back(std::move(*current));
        current.reset();
      }
    }
    if (current) ts_.fail("block '" + current->label + "' has no terminator");
    if (m.blocks.empty()) ts_.fail("method '" + m.name + "' has no blocks");
    ts_.expect_punct("}");
    return m;
  }

  Operand parse_operand() {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case TokenKind::kInt:
        return Literal(ts_.next().int_value);
      case TokenKind::kFloat:
        return Literal(ts_.next().float_value);
      case TokenKind::kString:
        return Literal(ts_.next().text);
      case TokenKind::kIdent:
        if (t.text == "true") return ts_.next(), Literal(true);
        if (t.text == "false") return ts_.next(), Literal(false);
        if (t.text == "null") return ts_.next(), Literal(Null{});
        return Var{ts_.next().text};
      default:
        ts_.fail("expected operand, found " + describe(t));
    }
  }

  LabelOperand parse_label_operand() {
    const Token& t = ts_.peek();
    if (t.kind == TokenKind::kIdent && t.text == "pc") {
      ts_.next();
      return PcRef{};
    }
    if (t.kind == TokenKind::kIdent && is_shadow_name(t.text)) {
      return LabelVar{ts_.next().text};
    }
    return parse_label(ts_);
  }

  std::vector<LabelOperand> parse_label_operand_list() {
    std::vector<LabelOperand> ops;
    ts_.expect_punct("(");
    if (!ts_.is_punct(")")) {
      do {
        ops.push_back(parse_label_operand());
      } while (ts_.accept_punct(","));
    }
    ts_.expect_punct(")");
    return ops;
  }

  template <class V, class F>
  std::vector<std::pair<std::string, V>> parse_incoming(F parse_value) {
    std::vector<std::pair<std::string, V>> incoming;
    ts_.expect_punct("[");
    if (!ts_.is_punct("]")) {
      do {
        std::string block = ts_.expect_ident("block label");
        ts_.expect_punct(":");
        incoming.emplace_back(std::move(block), parse_value());
      } while (ts_.accept_punct(","));
    }
    ts_.expect_punct("]");
    return incoming;
  }

  std::string parse_string(std::string_view what) {
    if (ts_.peek().kind != TokenKind::kString) {
      ts_.fail("expected " + std::string(what) + ", found " +
               describe(ts_.peek()));
    }
    return ts_.next().text;
  }

  // Parses one line; returns a terminator when the line is one.
  std::optional<Terminator> parse_line(BasicBlock& block) {
    if (ts_.accept_ident("if")) {
      BranchInst b;
      b.cond = ts_.expect_ident("condition variable");
      ts_.expect_keyword("goto");
      b.target = ts_.expect_ident("block label");
      return Terminator(std::move(b));
    }
    if (ts_.accept_ident("goto")) {
      return Terminator(GotoInst{ts_.expect_ident("block label")});
    }
    if (ts_.accept_ident("return")) {
      return Terminator(ReturnInst{parse_operand()});
    }
    if (ts_.accept_ident("set_pc")) {
      block.body.push_back(SetPcInst{parse_label_operand_list()});
      return std::nullopt;
    }
    if (ts_.accept_ident("assert_flow")) {
      AssertFlowInst a;
      ts_.expect_punct("(");
      a.value = parse_label_operand();
      ts_.expect_punct("<=");
      a.bound = parse_label_operand();
      ts_.expect_punct(",");
      a.reason = parse_string("reason string");
      ts_.expect_punct(")");
      block.body.push_back(std::move(a));
      return std::nullopt;
    }
    if (ts_.accept_ident("leak")) {
      block.body.push_back(LeakHaltInst{parse_string("reason string")});
      return std::nullopt;
    }
    if (ts_.is_ident("pc") && ts_.is_punct("=", 1)) {
      ts_.next();
      ts_.next();
      ts_.expect_keyword("phi_label");
      PhiLabelInst phi;
      phi.incoming = parse_incoming<LabelOperand>(
          [this] { return parse_label_operand(); });
      block.body.push_back(std::move(phi));
      return std::nullopt;
    }

    std::string first = ts_.expect_ident("instruction");
    if (ts_.accept_punct(".")) {
      std::string field = ts_.expect_ident("field name");
      ts_.expect_punct("=");
      if (is_shadow_name(field)) {
        block.body.push_back(StoreSlotInst{first, field, parse_label_operand()});
      } else {
        block.body.push_back(StoreFieldInst{first, field, parse_operand()});
      }
      return std::nullopt;
    }
    ts_.expect_punct("=");
    block.body.push_back(parse_rhs(std::move(first)));
    return std::nullopt;
  }

  Instruction parse_rhs(std::string dst) {
    const Token& t = ts_.peek();
    if (t.kind == TokenKind::kIdent) {
      const std::string& w = t.text;
      if (w == "save_pc" && ts_.peek(1).kind == TokenKind::kNewline) {
        ts_.next();
        return SavePcInst{dst};
      }
      if (w == "join" && ts_.is_punct("(", 1)) {
        ts_.next();
        return JoinInst{dst, parse_label_operand_list()};
      }
      if (w == "phi_label" && ts_.is_punct("[", 1)) {
        ts_.next();
        PhiLabelInst phi;
        phi.dst = dst;
        phi.incoming = parse_incoming<LabelOperand>(
            [this] { return parse_label_operand(); });
        return phi;
      }
      if (w == "phi" && ts_.is_punct("[", 1)) {
        ts_.next();
        PhiInst phi;
        phi.dst = dst;
        phi.incoming =
            parse_incoming<Operand>([this] { return parse_operand(); });
        return phi;
      }
      if (w == "instantiate" && ts_.peek(1).kind == TokenKind::kIdent) {
        ts_.next();
        bool field_form = (ts_.is_ident("bound") || ts_.is_ident("taint")) &&
                          ts_.peek(1).kind == TokenKind::kIdent &&
                          ts_.is_punct(".", 2);
        if (field_form) {
          FieldTemplate ft;
          ft.mode = ts_.next().text == "bound" ? FieldTemplateMode::kBound
                                               : FieldTemplateMode::kTaint;
          ft.object = ts_.expect_ident("object");
          ts_.expect_punct(".");
          ft.field = ts_.expect_ident("field");
          return InstantiateInst{dst, ft};
        }
        return InstantiateInst{dst, LocalsTemplate{parse_template(ts_)}};
      }
      if (w == "new" && ts_.peek(1).kind == TokenKind::kIdent) {
        ts_.next();
        return NewInst{dst, ts_.expect_ident("class name")};
      }
      if (w == "call" && ts_.peek(1).kind == TokenKind::kIdent &&
          ts_.is_punct(".", 2)) {
        ts_.next();
        CallInst c;
        c.dst = dst;
        c.object = ts_.expect_ident("receiver");
        ts_.expect_punct(".");
        c.method = ts_.expect_ident("method name");
        ts_.expect_punct("(");
        if (!ts_.is_punct(")")) {
          do {
            c.args.push_back(parse_operand());
          } while (ts_.accept_punct(","));
        }
        ts_.expect_punct(")");
        return c;
      }
      if (auto op = binop_from_string(w);
          op && ts_.peek(1).kind != TokenKind::kNewline &&
          ts_.peek(1).kind != TokenKind::kEnd && !ts_.is_punct(".", 1)) {
        ts_.next();
        BinOpInst b;
        b.dst = dst;
        b.op = *op;
        b.lhs = parse_operand();
        ts_.expect_punct(",");
        b.rhs = parse_operand();
        return b;
      }
      if (ts_.is_punct(".", 1)) {
        std::string object = ts_.next().text;
        ts_.next();
        std::string field = ts_.expect_ident("field name");
        if (is_shadow_name(field)) return LoadSlotInst{dst, object, field};
        return LoadFieldInst{dst, object, field};
      }
    }
    Operand src = parse_operand();
    if (const Var* v = std::get_if<Var>(&src)) return CopyInst{dst, v->name};
    return ConstInst{dst, std::get<Literal>(src)};
  }

  TokenStream ts_;
};

}  // namespace

Program parse_program_syntax(std::string_view text) {
  return ProgramParser(text).parse();
}

Program parse_program(std::string_view text) {
  Program p = parse_program_syntax(text);
  verify_program(p);
  return p;
}

}  // namespace sif
