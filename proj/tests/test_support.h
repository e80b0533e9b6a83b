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

// Generators and brute-force oracles shared by unit and acceptance tests.

#ifndef SIF_TESTS_TEST_SUPPORT_H_
#define SIF_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sif/cfg.h"
#include "sif/error.h"
#include "sif/instrument.h"
#include "sif/ir.h"
#include "sif/runtime.h"
#include "sif/specs.h"
#include "sif/suite.h"
#include "sif/lattice.h"

namespace sif::testing {

// Template environment keyed by dependency name.
using Env = std::map<std::string, std::optional<ParamValue>>;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus_path(const std::string& name) {
  return std::string(SIF_CORPUS_DIR) + "/" + name;
}

// Replaces methods of `base` by the same-named methods of `patch`, a
// syntax-only program of partial classes, and re-verifies the result.
inline Program apply_overrides(Program base, const Program& patch) {
  for (const ClassDef& pc : patch.classes) {
    ClassDef* target = base.find_class(pc.name);
    if (!target) throw ValidationError("patch names unknown class " + pc.name);
    for (const MethodDef& m : pc.methods) {
      auto it = std::find_if(target->methods.begin(), target->methods.end(),
                             [&](const MethodDef& x) { return x.name == m.name; });
      if (it == target->methods.end()) {
        throw ValidationError("patch names unknown method " + pc.name + "." +
                              m.name);
      }
      if (it->params != m.params || it->return_type != m.return_type) {
        throw ValidationError("patch changes the signature of " + pc.name +
                              "." + m.name);
      }
      *it = m;
    }
  }
  verify_program(base);
  return base;
}

// Method text with local label variables renamed L0, L1, ... in order of
// first appearance. Slot names (after a '.') are layout, not fresh names,
// and are kept.
inline std::string normalized_method(const MethodDef& m) {
  std::string text;
  for (const BasicBlock& b : m.blocks) {
    text += b.label + ":\n";
    for (const Instruction& i : b.body) text += "  " + to_string(i) + "\n";
    text += "  " + to_string(b.terminator) + "\n";
  }
  static const std::regex name(R"((^|[^.\w$])(secLbl\$[\w$]*))");
  std::map<std::string, std::string> rename;
  std::string out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), name);
  size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    const std::smatch& mt = *it;
    size_t pos = static_cast<size_t>(mt.position(2));
    out += text.substr(last, pos - last);
    auto [slot, fresh] = rename.emplace(mt.str(2), "");
    if (fresh) slot->second = "L" + std::to_string(rename.size() - 1);
    out += slot->second;
    last = pos + mt.length(2);
  }
  out += text.substr(last);
  return out;
}

// A random lattice whose sampled universe (params in {1,2}) stays within 30
// labels. Candidates with cycles or missing lubs are rejected and redrawn.
inline LatticeDef random_lattice(std::mt19937& rng, int* rejected = nullptr) {
  for (;;) {
    std::uniform_int_distribution<int> nbases(0, 3);
    std::vector<std::string> bases;
    for (int i = 0, n = nbases(rng); i < n; ++i) {
      bases.push_back("B" + std::to_string(i));
    }
    std::vector<std::pair<std::string, size_t>> fams;
    if (std::bernoulli_distribution(0.3)(rng)) {
      fams.push_back({"G", 2});
    } else {
      fams.push_back({"F", 1});
      if (std::bernoulli_distribution(0.5)(rng)) fams.push_back({"H", 1});
    }
    std::vector<Label> nodes;
    for (const auto& b : bases) nodes.push_back(Label::Base(b));
    for (const auto& [f, a] : fams) {
      nodes.push_back(Label::FamilyBottom(f, a));
      nodes.push_back(Label::FamilyTop(f, a));
    }
    std::shuffle(nodes.begin(), nodes.end(), rng);
    std::vector<std::pair<Label, Label>> edges;
    std::bernoulli_distribution coin(0.35);
    for (size_t i = 0; i < nodes.size(); ++i) {
      for (size_t j = i + 1; j < nodes.size(); ++j) {
        if (coin(rng)) edges.push_back({nodes[i], nodes[j]});
      }
    }
    try {
      return LatticeDef::make(bases, fams, edges);
    } catch (const ValidationError&) {
      if (rejected) ++*rejected;
    }
  }
}

// Successors including the synthetic exit.
inline std::vector<size_t> succs_with_exit(const Cfg& c, size_t x) {
  if (x == c.exit()) return {};
  std::vector<size_t> out = c.succ[x];
  if (c.returns[x]) out.push_back(c.exit());
  return out;
}

// Random CFG with up to `max_blocks` blocks where every block is reachable
// from the entry and reaches a return.
inline Cfg random_cfg(std::mt19937& rng, size_t max_blocks) {
  for (;;) {
    size_t n = std::uniform_int_distribution<size_t>(1, max_blocks)(rng);
    std::vector<std::pair<size_t, size_t>> edges;
    std::vector<size_t> returns;
    std::uniform_int_distribution<size_t> pick(0, n - 1);
    for (size_t b = 0; b < n; ++b) {
      int kind = std::uniform_int_distribution<int>(0, 2)(rng);
      if (kind == 0 || n == 1) {
        returns.push_back(b);
      } else if (kind == 1) {
        edges.push_back({b, pick(rng)});
      } else {
        size_t x = pick(rng), y = pick(rng);
        if (x == y) y = (y + 1) % n;
        edges.push_back({b, x});
        edges.push_back({b, y});
      }
    }
    Cfg c = Cfg::from_edges(n, edges, returns);
    // Reachability in both directions.
    auto reaches = [&](size_t from, size_t to) {
      std::vector<bool> seen(n + 1, false);
      std::vector<size_t> work{from};
      seen[from] = true;
      while (!work.empty()) {
        size_t x = work.back();
        work.pop_back();
        for (size_t y : succs_with_exit(c, x)) {
          if (!seen[y]) {
            seen[y] = true;
            work.push_back(y);
          }
        }
      }
      return static_cast<bool>(seen[to]);
    };
    bool ok = true;
    for (size_t b = 0; b < n; ++b) {
      ok = ok && reaches(c.entry, b) && reaches(b, c.exit());
    }
    if (ok) return c;
  }
}

// Whether some simple path from `from` to `to` avoids `avoid`, found by
// enumerating paths.
inline bool path_avoiding(const Cfg& c, size_t from, size_t to,
                          size_t avoid) {
  std::vector<bool> on_path(c.num_blocks() + 1, false);
  std::function<bool(size_t)> dfs = [&](size_t x) {
    if (x == avoid) return false;
    if (x == to) return true;
    on_path[x] = true;
    for (size_t y : succs_with_exit(c, x)) {
      if (!on_path[y] && dfs(y)) return true;
    }
    on_path[x] = false;
    return false;
  };
  return dfs(from);
}

// Immediate (post-)dominators from path enumeration. For post-dominance,
// `a` post-dominates `b` when every path from b to exit meets a.
inline DomTree oracle_tree(const Cfg& c, bool post) {
  size_t n = c.num_blocks() + 1;
  size_t root = post ? c.exit() : c.entry;
  auto dom = [&](size_t a, size_t b) {
    if (a == b) return true;
    return post ? !path_avoiding(c, b, root, a)
                : !path_avoiding(c, root, b, a);
  };
  DomTree out(n);
  for (size_t b = 0; b < n; ++b) {
    if (b == root) continue;
    if (!post && b == c.exit()) continue;
    std::vector<size_t> strict;
    for (size_t a = 0; a < n; ++a) {
      if (a != b && dom(a, b)) strict.push_back(a);
    }
    for (size_t a : strict) {
      bool closest = true;
      for (size_t o : strict) closest = closest && dom(o, a);
      if (closest) out[b] = a;
    }
  }
  return out;
}

// A method `long f(bool c)` whose blocks follow a random CFG. Each CFG node
// becomes block B<i> holding one constant; two-way nodes branch on `c` to
// one target and reach the other through a trampoline block.
inline std::string random_method_text(std::mt19937& rng, size_t max_blocks) {
  Cfg c = random_cfg(rng, max_blocks);
  std::string s = "class R {\n  long f(bool c) {\n  start:\n    goto B0\n";
  for (size_t b = 0; b < c.num_blocks(); ++b) {
    std::string id = std::to_string(b);
    s += "  B" + id + ":\n    v" + id + " = " + id + "\n";
    if (c.returns[b]) {
      s += "    return v" + id + "\n";
    } else if (c.succ[b].size() == 1) {
      s += "    goto B" + std::to_string(c.succ[b][0]) + "\n";
    } else {
      s += "    if c goto B" + std::to_string(c.succ[b][0]) + "\n";
      s += "  T" + id + ":\n    goto B" + std::to_string(c.succ[b][1]) + "\n";
    }
  }
  return s + "  }\n}\n";
}

// Plain and instrumented forms of a corpus program.
struct Pipeline {
  Program plain;
  Program instrumented;
  ShadowLayout layout;
  LatticeDef lattice;
};

// `patch` names a method-override file applied before instrumentation;
// `spec` may be empty for programs without boundary annotations.
inline Pipeline corpus_pipeline(const std::string& ir, const std::string& spec,
                                const std::string& patch = "") {
  Pipeline pl;
  pl.lattice = parse_lattice(read_file(corpus_path("employees.lat")));
  pl.plain = parse_program(read_file(corpus_path(ir)));
  if (!patch.empty()) {
    pl.plain = apply_overrides(
        pl.plain, parse_program_syntax(read_file(corpus_path(patch))));
  }
  ResolvedSpecs specs;
  if (!spec.empty()) {
    specs = resolve_specs(parse_specs(read_file(corpus_path(spec))), pl.plain,
                          pl.lattice);
  }
  InstrumentResult r = instrument_program(pl.plain, specs);
  pl.instrumented = std::move(r.program);
  pl.layout = std::move(r.layout);
  return pl;
}

// What a Public observer sees of an outcome.
inline std::string public_view(const LatticeDef& lat, const RunOutcome& o) {
  if (o.is_leak()) return "<leak>";
  if (!leq(lat, o.label, Label::Public())) return "<hidden>";
  return to_string(o.value);
}

// A program entry with one Secret input, for paired non-interference runs.
struct NiSubject {
  std::string name;
  std::string ir;
  std::string spec;
  std::string entry;
  std::vector<Literal> args;  // the secret slot is overwritten per run
  size_t secret = 0;
  std::function<Literal(std::mt19937&)> draw;
  bool known_limitation = false;
};

inline std::vector<NiSubject> ni_subjects() {
  auto pick = [](std::vector<int64_t> xs) {
    return [xs](std::mt19937& rng) -> Literal {
      return xs[std::uniform_int_distribution<size_t>(0, xs.size() - 1)(rng)];
    };
  };
  auto small_int = [](std::mt19937& rng) -> Literal {
    return std::uniform_int_distribution<int64_t>(-5, 5)(rng);
  };
  auto password = [](std::mt19937& rng) -> Literal {
    return "pw" + std::to_string(std::uniform_int_distribution<int>(0, 999)(rng));
  };
  const std::string emp = "employees.sif", spec = "employees.spec";
  return {
      {"public_profile", emp, spec, "App.publicDispatch", {int64_t{0}}, 0,
       pick({1, 2, 10, 11})},
      {"employee_info", emp, spec, "App.associateDispatch",
       {int64_t{1}, int64_t{0}}, 1, pick({1, 2, 10, 11})},
      {"supervisor_salary", emp, spec, "App.supervisorSalary",
       {int64_t{10}, int64_t{0}}, 1, pick({1, 2})},
      {"average_salary", emp, spec, "App.averageSalary", {int64_t{0}}, 0,
       pick({10, 11})},
      {"add_supervisor", emp, spec, "App.addSupervisor",
       {int64_t{12}, "Eve", "5 Oak St", 5100.0, ""}, 4, password},
      {"add_associate", emp, spec, "App.addAssociate",
       {int64_t{5}, "Fay", "6 Oak St", 2900.0, "", int64_t{10}, 4.0}, 4,
       password},
      {"explicit", "ni/explicit.sif", "", "Explicit.main", {int64_t{0}}, 0,
       small_int},
      {"implicit", "ni/implicit.sif", "", "Implicit.main", {int64_t{0}}, 0,
       small_int},
      {"loop", "ni/loop.sif", "", "Loop.main", {int64_t{0}}, 0, small_int},
      {"limitation", "ni/limitation.sif", "", "Limitation.main", {int64_t{0}},
       0, small_int, /*known_limitation=*/true},
  };
}

struct NiResult {
  size_t pairs = 0;
  size_t counterexamples = 0;
  std::string first;  // description of the first counterexample
};

// Runs `pairs` pairs differing only in the Secret input.
inline NiResult run_ni_pairs(const NiSubject& s, const Pipeline& pl,
                             std::mt19937& rng, size_t pairs) {
  NiResult r;
  auto once = [&](const Literal& secret) {
    std::vector<EntryArg> args;
    for (size_t i = 0; i < s.args.size(); ++i) {
      bool hidden = i == s.secret;
      args.push_back({from_literal(hidden ? secret : s.args[i]),
                      hidden ? Label::Secret() : Label::Public()});
    }
    return public_view(pl.lattice,
                       run(pl.instrumented, pl.lattice, s.entry, args,
                           Label::Public()));
  };
  for (size_t i = 0; i < pairs; ++i) {
    Literal a = s.draw(rng), b = s.draw(rng);
    std::string va = once(a), vb = once(b);
    ++r.pairs;
    if (va == "<leak>" || vb == "<leak>" || va == vb) continue;
    if (r.counterexamples++ == 0) {
      r.first = to_string(a) + " -> " + va + ", " + to_string(b) + " -> " + vb;
    }
  }
  return r;
}

// Field and object slots must only rise; transfer slots (params, return,
// pcIn) are rewritten per call and are skipped.
inline std::optional<std::string> monotonicity_violation(
    const LatticeDef& lat, const ShadowLayout& layout,
    const std::vector<SlotUpdate>& log) {
  std::set<std::string> transfer;
  for (const auto& [cls, shadow] : layout.classes) {
    for (const auto& [m, slots] : shadow.method_slots) {
      transfer.insert(slots.params.begin(), slots.params.end());
      transfer.insert(slots.ret);
      transfer.insert(slots.pc_in);
    }
  }
  std::map<std::pair<uint64_t, std::string>, Label> last;
  for (const SlotUpdate& u : log) {
    if (transfer.count(u.slot)) continue;
    auto key = std::make_pair(u.object, u.slot);
    auto it = last.find(key);
    if (it != last.end() && !leq(lat, it->second, u.label)) {
      return u.class_name + "#" + std::to_string(u.object) + "." + u.slot +
             ": " + to_string(it->second) + " then " + to_string(u.label);
    }
    last[key] = u.label;
  }
  return std::nullopt;
}

}  // namespace sif::testing

#endif  // SIF_TESTS_TEST_SUPPORT_H_
