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

#include "sif/suite.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sif/lexer.h"

namespace sif {

namespace {

Literal parse_literal(TokenStream& ts) {
  const Token& t = ts.peek();
  switch (t.kind) {
    case TokenKind::kInt:
      return ts.next().int_value;
    case TokenKind::kFloat:
      return ts.next().float_value;
    case TokenKind::kString:
      return ts.next().text;
    case TokenKind::kIdent:
      if (ts.accept_ident("true")) return true;
      if (ts.accept_ident("false")) return false;
      if (ts.accept_ident("null")) return Null{};
      [[fallthrough]];
    default:
      ts.fail("expected literal argument, found " + describe(t));
  }
}

double parse_number(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == TokenKind::kInt) return static_cast<double>(ts.next().int_value);
  if (t.kind == TokenKind::kFloat) return ts.next().float_value;
  ts.fail("expected number, found " + describe(t));
}

TestCase parse_one(TokenStream& ts) {
  TestCase c;
  c.loc = ts.peek().loc;
  ts.expect_keyword("case");
  c.name = ts.expect_ident("case name");
  ts.expect_punct(":");
  ts.expect_keyword("call");
  std::string cls = ts.expect_ident("class name");
  ts.expect_punct(".");
  c.entry = cls + "." + ts.expect_ident("method name");
  ts.expect_punct("(");
  if (!ts.accept_punct(")")) {
    do c.args.push_back(parse_literal(ts));
    while (ts.accept_punct(","));
    ts.expect_punct(")");
  }
  bool have_labels = false;
  bool have_pc = false;
  bool have_expect = false;
  while (!ts.is_newline() && !ts.at_end()) {
    const Token& kw = ts.peek();
    if (ts.accept_ident("labels")) {
      if (have_labels) ts.fail_at(kw, "duplicate labels(...)");
      have_labels = true;
      ts.expect_punct("(");
      if (!ts.accept_punct(")")) {
        do c.labels.push_back(parse_label(ts));
        while (ts.accept_punct(","));
        ts.expect_punct(")");
      }
      if (c.labels.size() != c.args.size()) {
        ts.fail_at(kw, "case '" + c.name + "' has " +
                           std::to_string(c.args.size()) + " arguments but " +
                           std::to_string(c.labels.size()) + " labels");
      }
    } else if (ts.accept_ident("pc")) {
      if (have_pc) ts.fail_at(kw, "duplicate pc(...)");
      have_pc = true;
      ts.expect_punct("(");
      c.pc = parse_label(ts);
      ts.expect_punct(")");
    } else if (ts.accept_ident("expect")) {
      if (have_expect) ts.fail_at(kw, "duplicate expect");
      have_expect = true;
      const Token& what = ts.peek();
      if (ts.accept_ident("normal")) {
        c.expect = Expectation::kNormal;
      } else if (ts.accept_ident("leak")) {
        c.expect = Expectation::kLeak;
      } else {
        ts.fail_at(what, "expected 'normal' or 'leak', found " + describe(what));
      }
    } else if (ts.accept_ident("ref")) {
      if (c.ref) ts.fail_at(kw, "duplicate ref(...)");
      ts.expect_punct("(");
      c.ref = parse_number(ts);
      ts.expect_punct(")");
    } else {
      ts.fail("unexpected " + describe(kw) + " in case '" + c.name + "'");
    }
  }
  if (!have_expect) ts.fail("case '" + c.name + "' lacks 'expect normal|leak'");
  if (!have_labels) c.labels.assign(c.args.size(), Label::Public());
  return c;
}

std::string kind_name(Expectation e) {
  return e == Expectation::kNormal ? "normal" : "leak";
}

// Keeps table cells on one line.
std::string cell(std::string s) {
  for (char& ch : s) {
    if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

std::string format_double(double x, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

}  // namespace

std::vector<TestCase> parse_cases(std::string_view text) {
  TokenStream ts(tokenize(text, /*keep_newlines=*/true));
  std::vector<TestCase> out;
  ts.skip_newlines();
  while (!ts.at_end()) {
    out.push_back(parse_one(ts));
    if (!ts.at_end()) ts.expect_newline();
    ts.skip_newlines();
  }
  for (size_t i = 0; i < out.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (out[i].name == out[j].name) {
        throw ParseError("duplicate case name '" + out[i].name + "'",
                         out[i].loc);
      }
    }
  }
  return out;
}

std::string print_case(const TestCase& c) {
  std::string s = "case " + c.name + ": call " + c.entry + "(";
  for (size_t i = 0; i < c.args.size(); ++i) {
    if (i) s += ", ";
    s += to_string(c.args[i]);
  }
  s += ") labels(";
  for (size_t i = 0; i < c.labels.size(); ++i) {
    if (i) s += ", ";
    s += to_string(c.labels[i]);
  }
  s += ") pc(" + to_string(c.pc) + ") expect " + kind_name(c.expect);
  if (c.ref) s += " ref(" + format_double(*c.ref, "%g") + ")";
  return s;
}

std::vector<EntryArg> entry_args(const TestCase& c) {
  std::vector<EntryArg> out;
  for (size_t i = 0; i < c.args.size(); ++i) {
    out.push_back({from_literal(c.args[i]),
                   i < c.labels.size() ? c.labels[i] : Label::Public()});
  }
  return out;
}

SuiteReport run_suite(const Program& p, const LatticeDef& lat,
                      const std::vector<TestCase>& cases,
                      const RunOptions& options) {
  SuiteReport r;
  for (const TestCase& c : cases) {
    CaseVerdict v;
    v.name = c.name;
    v.expected = c.expect;
    try {
      RunOutcome o = run(p, lat, c.entry, entry_args(c), c.pc, options);
      if (o.is_leak()) {
        v.actual = "leak";
        v.detail = to_string(*o.leak);
      } else {
        v.actual = "normal";
        v.detail = to_string(o.value) + " : " + to_string(o.label);
      }
      v.passed = v.actual == kind_name(c.expect);
      v.outcome = std::move(o);
    } catch (const Error& e) {
      v.actual = "error";
      v.detail = e.what();
    }
    (v.passed ? r.passed : r.failed)++;
    r.rows.push_back(std::move(v));
  }
  return r;
}

std::string format_report(const SuiteReport& r) {
  std::ostringstream out;
  out << "case\texpected\tactual\tverdict\tdetail\n";
  for (const CaseVerdict& v : r.rows) {
    out << cell(v.name) << '\t' << kind_name(v.expected) << '\t' << v.actual
        << '\t' << (v.passed ? "pass" : "FAIL") << '\t' << cell(v.detail)
        << '\n';
  }
  out << "summary\tpassed=" << r.passed << "\tfailed=" << r.failed
      << "\ttotal=" << r.rows.size() << '\n';
  return out.str();
}

OverheadReport measure_overhead(const Program& original,
                                const Program& instrumented,
                                const LatticeDef& lat,
                                const std::vector<TestCase>& cases,
                                size_t repetitions) {
  using Clock = std::chrono::steady_clock;
  if (repetitions == 0) repetitions = 1;
  OverheadReport rep;
  double log_sum = 0, ref_log_sum = 0;
  double orig_total = 0, inst_total = 0;
  bool all_refs = !cases.empty();
  for (const TestCase& c : cases) {
    const std::vector<EntryArg> args = entry_args(c);
    auto once = [&](const Program& p) {
      auto t0 = Clock::now();
      RunOutcome o = run(p, lat, c.entry, args, c.pc);
      auto t1 = Clock::now();
      if (o.is_leak()) {
        throw RunError("bench case '" + c.name + "' leaked: " +
                       to_string(*o.leak));
      }
      return std::chrono::duration<double, std::nano>(t1 - t0).count();
    };
    once(original);
    once(instrumented);
    double orig = 0, inst = 0;
    for (size_t i = 0; i < repetitions; ++i) {
      orig += once(original);
      inst += once(instrumented);
    }
    OverheadRow row;
    row.name = c.name;
    row.original_ns = orig / static_cast<double>(repetitions);
    row.instrumented_ns = inst / static_cast<double>(repetitions);
    row.factor = inst / orig;
    row.ref = c.ref;
    log_sum += std::log(row.factor);
    orig_total += orig;
    inst_total += inst;
    if (c.ref) {
      ref_log_sum += std::log(*c.ref);
    } else {
      all_refs = false;
    }
    rep.rows.push_back(std::move(row));
  }
  if (!rep.rows.empty()) {
    double n = static_cast<double>(rep.rows.size());
    rep.geomean = std::exp(log_sum / n);
    rep.total_factor = inst_total / orig_total;
    if (all_refs) rep.ref_geomean = std::exp(ref_log_sum / n);
  }
  return rep;
}

std::string format_overhead(const OverheadReport& r) {
  std::ostringstream out;
  out << "case\toriginal_us\tinstrumented_us\tfactor\treference\n";
  for (const OverheadRow& row : r.rows) {
    out << cell(row.name) << '\t'
        << format_double(row.original_ns / 1000.0, "%.2f") << '\t'
        << format_double(row.instrumented_ns / 1000.0, "%.2f") << '\t'
        << format_double(row.factor, "%.2f") << '\t'
        << (row.ref ? format_double(*row.ref, "%.2f") : "-") << '\n';
  }
  out << "geomean\t-\t-\t" << format_double(r.geomean, "%.2f") << '\t'
      << (r.ref_geomean ? format_double(*r.ref_geomean, "%.2f") : "-") << '\n';
  out << "total\t-\t-\t" << format_double(r.total_factor, "%.2f") << "\t-\n";
  return out.str();
}

}  // namespace sif
