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

// Control-flow graphs, dominance and post-dominance.

#ifndef SIF_CFG_H_
#define SIF_CFG_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sif/ir.h"

namespace sif {

// Blocks are numbered in method order; node `exit()` is a synthetic exit
// joined by every returning block.
struct Cfg {
  std::vector<std::string> labels;
  std::vector<std::vector<size_t>> succ;
  std::vector<std::vector<size_t>> pred;
  std::vector<bool> returns;
  std::vector<bool> ends_in_branch;
  size_t entry = 0;

  size_t num_blocks() const { return labels.size(); }
  size_t exit() const { return labels.size(); }
  std::optional<size_t> index_of(std::string_view label) const;

  // Builds a graph directly; `edges` are (from, to) pairs. Blocks with more
  // than one successor are marked as branches.
  static Cfg from_edges(size_t n, const std::vector<std::pair<size_t, size_t>>& edges,
                        const std::vector<size_t>& return_blocks);
};

// Branch yields the target and the fall-through block. Throws
// ValidationError for unknown targets or a branch in the last block.
Cfg build_cfg(const MethodDef& m);

// Immediate (post-)dominator per node; nullopt for the root and for nodes
// unreachable from it. Indices range over blocks plus exit().
using DomTree = std::vector<std::optional<size_t>>;

// Throws ValidationError when a block is unreachable from the entry.
DomTree dominators(const Cfg& c);

// Immediate post-dominators; ipdom may be exit(). Throws ValidationError
// when a block cannot reach the exit.
DomTree post_dominators(const Cfg& c);

// Whether `a` (post-)dominates `b` in the given tree (reflexive).
bool tree_dominates(const DomTree& tree, size_t a, size_t b);

// For each block with at least two predecessors: the branch block whose
// scope it closes (it is that block's immediate post-dominator), or nullopt
// for a plain merge. When several branch blocks close at the same merge the
// outermost one that dominates the merge is chosen.
std::vector<std::optional<size_t>> scope_opens(const Cfg& c,
                                               const DomTree& ipdom,
                                               const DomTree& idom);

}  // namespace sif

#endif  // SIF_CFG_H_
