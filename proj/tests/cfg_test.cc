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

#include "sif/cfg.h"
#include "sif/error.h"
#include "test_support.h"

namespace sif {
namespace {

TEST(Dominance, DiamondByHand) {
  // 0 -> {1, 2} -> 3 -> return
  Cfg c = Cfg::from_edges(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, {3});
  DomTree idom = dominators(c);
  DomTree ipdom = post_dominators(c);
  EXPECT_EQ(idom[0], std::nullopt);
  EXPECT_EQ(idom[3], 0u);
  EXPECT_EQ(ipdom[0], 3u);
  EXPECT_EQ(ipdom[1], 3u);
  EXPECT_EQ(ipdom[3], c.exit());
  auto opens = scope_opens(c, ipdom, idom);
  EXPECT_EQ(opens[3], 0u);
  EXPECT_EQ(opens[1], std::nullopt);
}

TEST(Dominance, EarlyReturnMergesAtExit) {
  // 0 -> {1 (return), 2 (return)}
  Cfg c = Cfg::from_edges(3, {{0, 1}, {0, 2}}, {1, 2});
  DomTree ipdom = post_dominators(c);
  EXPECT_EQ(ipdom[0], c.exit());
}

TEST(Dominance, NestedBranchesClosingTogetherPickOutermost) {
  // 0 -> {1, 3}; 1 -> {2, 3}; 2 -> 3; 3 returns.
  Cfg c = Cfg::from_edges(4, {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, {3});
  DomTree idom = dominators(c);
  DomTree ipdom = post_dominators(c);
  EXPECT_EQ(ipdom[0], 3u);
  EXPECT_EQ(ipdom[1], 3u);
  EXPECT_EQ(scope_opens(c, ipdom, idom)[3], 0u);
}

TEST(Dominance, LoopHeader) {
  // 0 -> 1; 1 -> {2, 3}; 2 -> 1; 3 returns.
  Cfg c = Cfg::from_edges(4, {{0, 1}, {1, 2}, {1, 3}, {2, 1}}, {3});
  DomTree idom = dominators(c);
  DomTree ipdom = post_dominators(c);
  EXPECT_EQ(ipdom[1], 3u);
  EXPECT_EQ(ipdom[2], 1u);
  auto opens = scope_opens(c, ipdom, idom);
  // The header merges entry and back edge but closes no branch scope.
  EXPECT_EQ(opens[1], std::nullopt);
}

TEST(Dominance, UnreachableBlockIsRejected) {
  Cfg c = Cfg::from_edges(2, {}, {0, 1});
  EXPECT_THROW(dominators(c), ValidationError);
}

TEST(Dominance, InfiniteLoopIsRejected) {
  Cfg c = Cfg::from_edges(2, {{0, 1}, {1, 1}}, {0});
  EXPECT_THROW(post_dominators(c), ValidationError);
}

TEST(Dominance, TreeDominatesIsReflexiveAndTransitive) {
  Cfg c = Cfg::from_edges(3, {{0, 1}, {1, 2}}, {2});
  DomTree idom = dominators(c);
  EXPECT_TRUE(tree_dominates(idom, 1, 1));
  EXPECT_TRUE(tree_dominates(idom, 0, 2));
  EXPECT_FALSE(tree_dominates(idom, 2, 0));
}

TEST(RandomCfgs, PostDominatorsMatchPathEnumeration) {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    Cfg c = testing::random_cfg(rng, 8);
    DomTree expected = testing::oracle_tree(c, true);
    DomTree got = post_dominators(c);
    for (size_t b = 0; b < c.num_blocks(); ++b) {
      ASSERT_EQ(got[b], expected[b]) << "cfg " << i << " block " << b;
    }
  }
}

TEST(RandomCfgs, DominatorsMatchPathEnumeration) {
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    Cfg c = testing::random_cfg(rng, 8);
    DomTree expected = testing::oracle_tree(c, false);
    DomTree got = dominators(c);
    for (size_t b = 0; b < c.num_blocks(); ++b) {
      ASSERT_EQ(got[b], expected[b]) << "cfg " << i << " block " << b;
    }
  }
}

// Every reported scope opener is a branch whose immediate post-dominator is
// the merge and which dominates it; no such branch is missed.
TEST(RandomCfgs, ScopeOpenersAreConsistent) {
  std::mt19937 rng(9);
  for (int i = 0; i < 200; ++i) {
    Cfg c = testing::random_cfg(rng, 8);
    DomTree idom = dominators(c);
    DomTree ipdom = post_dominators(c);
    auto opens = scope_opens(c, ipdom, idom);
    for (size_t l = 0; l < c.num_blocks(); ++l) {
      std::vector<size_t> cands;
      if (c.pred[l].size() >= 2) {
        for (size_t d = 0; d < c.num_blocks(); ++d) {
          if (c.ends_in_branch[d] && ipdom[d] == l &&
              tree_dominates(idom, d, l)) {
            cands.push_back(d);
          }
        }
      }
      if (cands.empty()) {
        EXPECT_EQ(opens[l], std::nullopt);
        continue;
      }
      ASSERT_TRUE(opens[l].has_value());
      for (size_t d : cands) EXPECT_TRUE(tree_dominates(idom, *opens[l], d));
    }
  }
}

}  // namespace
}  // namespace sif
