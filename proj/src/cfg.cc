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

#include "sif/cfg.h"

#include <algorithm>
#include <functional>

namespace sif {

std::optional<size_t> Cfg::index_of(std::string_view label) const {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return i;
  }
  return std::nullopt;
}

Cfg Cfg::from_edges(size_t n, const std::vector<std::pair<size_t, size_t>>& edges,
                    const std::vector<size_t>& return_blocks) {
  Cfg c;
  for (size_t i = 0; i < n; ++i) c.labels.push_back("B" + std::to_string(i));
  c.succ.assign(n, {});
  c.pred.assign(n, {});
  c.returns.assign(n, false);
  c.ends_in_branch.assign(n, false);
  for (auto [a, b] : edges) {
    if (std::find(c.succ[a].begin(), c.succ[a].end(), b) != c.succ[a].end()) {
      continue;
    }
    c.succ[a].push_back(b);
    c.pred[b].push_back(a);
  }
  for (size_t r : return_blocks) c.returns[r] = true;
  for (size_t i = 0; i < n; ++i) c.ends_in_branch[i] = c.succ[i].size() > 1;
  return c;
}

Cfg build_cfg(const MethodDef& m) {
  Cfg c;
  const size_t n = m.blocks.size();
  for (const auto& b : m.blocks) c.labels.push_back(b.label);
  c.succ.assign(n, {});
  c.pred.assign(n, {});
  c.returns.assign(n, false);
  c.ends_in_branch.assign(n, false);
  auto target = [&](const std::string& label) {
    auto idx = c.index_of(label);
    if (!idx) {
      throw ValidationError("method '" + m.name + "': unknown block label '" +
                            label + "'");
    }
    return *idx;
  };
  auto add_edge = [&](size_t a, size_t b) {
    if (std::find(c.succ[a].begin(), c.succ[a].end(), b) != c.succ[a].end()) {
      return;
    }
    c.succ[a].push_back(b);
    c.pred[b].push_back(a);
  };
  for (size_t i = 0; i < n; ++i) {
    const Terminator& t = m.blocks[i].terminator;
    if (const auto* br = std::get_if<BranchInst>(&t)) {
      if (i + 1 >= n) {
        throw ValidationError("method '" + m.name + "': branch in block '" +
                              m.blocks[i].label + "' has no fall-through block");
      }
      c.ends_in_branch[i] = true;
      add_edge(i, i + 1);
      add_edge(i, target(br->target));
    } else if (const auto* g = std::get_if<GotoInst>(&t)) {
      add_edge(i, target(g->target));
    } else {
      c.returns[i] = true;
    }
  }
  return c;
}

namespace {

// Cooper, Harvey and Kennedy's iterative dominator algorithm over a graph
// given by successor/predecessor callbacks.
DomTree compute_idoms(size_t num_nodes, size_t root,
                      const std::function<std::vector<size_t>(size_t)>& succs,
                      const std::function<std::vector<size_t>(size_t)>& preds) {
  std::vector<size_t> postorder;
  std::vector<bool> visited(num_nodes, false);
  // Iterative DFS to produce a postorder.
  std::vector<std::pair<size_t, size_t>> stack;
  std::vector<std::vector<size_t>> succ_cache(num_nodes);
  visited[root] = true;
  succ_cache[root] = succs(root);
  stack.emplace_back(root, 0);
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < succ_cache[node].size()) {
      size_t s = succ_cache[node][next++];
      if (!visited[s]) {
        visited[s] = true;
        succ_cache[s] = succs(s);
        stack.emplace_back(s, 0);
      }
    } else {
      postorder.push_back(node);
      stack.pop_back();
    }
  }
  std::vector<size_t> po_index(num_nodes, 0);
  for (size_t i = 0; i < postorder.size(); ++i) po_index[postorder[i]] = i;

  std::vector<std::optional<size_t>> idom(num_nodes);
  idom[root] = root;
  auto intersect = [&](size_t a, size_t b) {
    while (a != b) {
      while (po_index[a] < po_index[b]) a = *idom[a];
      while (po_index[b] < po_index[a]) b = *idom[b];
    }
    return a;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = postorder.rbegin(); it != postorder.rend(); ++it) {
      size_t b = *it;
      if (b == root) continue;
      std::optional<size_t> new_idom;
      for (size_t p : preds(b)) {
        if (!visited[p] || !idom[p]) continue;
        new_idom = new_idom ? intersect(p, *new_idom) : p;
      }
      if (new_idom && idom[b] != new_idom) {
        idom[b] = new_idom;
        changed = true;
      }
    }
  }
  idom[root].reset();
  for (size_t i = 0; i < num_nodes; ++i) {
    if (!visited[i]) idom[i].reset();
  }
  return idom;
}

}  // namespace

DomTree dominators(const Cfg& c) {
  const size_t n = c.num_blocks();
  DomTree idom = compute_idoms(
      n, c.entry, [&](size_t b) { return c.succ[b]; },
      [&](size_t b) { return c.pred[b]; });
  for (size_t b = 0; b < n; ++b) {
    if (b != c.entry && !idom[b]) {
      throw ValidationError("block '" + c.labels[b] +
                            "' is unreachable from the entry block");
    }
  }
  idom.push_back(std::nullopt);  // exit
  return idom;
}

DomTree post_dominators(const Cfg& c) {
  const size_t n = c.num_blocks();
  const size_t exit = c.exit();
  auto rsuccs = [&](size_t node) {
    if (node == exit) {
      std::vector<size_t> r;
      for (size_t b = 0; b < n; ++b) {
        if (c.returns[b]) r.push_back(b);
      }
      return r;
    }
    return c.pred[node];
  };
  auto rpreds = [&](size_t node) {
    if (node == exit) return std::vector<size_t>{};
    std::vector<size_t> r = c.succ[node];
    if (c.returns[node]) r.push_back(exit);
    return r;
  };
  DomTree ipdom = compute_idoms(n + 1, exit, rsuccs, rpreds);
  for (size_t b = 0; b < n; ++b) {
    if (!ipdom[b]) {
      throw ValidationError("block '" + c.labels[b] +
                            "' cannot reach a return");
    }
  }
  return ipdom;
}

bool tree_dominates(const DomTree& tree, size_t a, size_t b) {
  std::optional<size_t> cur = b;
  while (cur) {
    if (*cur == a) return true;
    cur = tree[*cur];
  }
  return false;
}

std::vector<std::optional<size_t>> scope_opens(const Cfg& c,
                                               const DomTree& ipdom,
                                               const DomTree& idom) {
  const size_t n = c.num_blocks();
  std::vector<std::optional<size_t>> out(n);
  for (size_t l = 0; l < n; ++l) {
    if (c.pred[l].size() < 2) continue;
    std::optional<size_t> best;
    for (size_t d = 0; d < n; ++d) {
      if (!c.ends_in_branch[d] || ipdom[d] != l) continue;
      if (!tree_dominates(idom, d, l)) continue;
      if (!best || tree_dominates(idom, d, *best)) best = d;
    }
    out[l] = best;
  }
  return out;
}

}  // namespace sif
