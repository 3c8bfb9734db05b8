// Copyright 2026 The ludeq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "ludeq/canonical.h"
#include "ludeq/equivalence.h"
#include "ludeq/reduce.h"
#include "test_support.h"

namespace ludeq {
namespace {

std::uint64_t Leaves(const Forest& f) {
  std::uint64_t n = 0;
  for (const GameTree& t : f) n += ComputeStats(t).terminal_nodes;
  return n;
}

// The oracles are checked against published counts and against each other
// before anything else relies on them.

TEST(OracleTest, PlainBoardGameCount) {
  EXPECT_EQ(testing::CountTicTacToeGames(true), 255168u);
  EXPECT_EQ(testing::CountTicTacToeGames(false), 255168u);
}

TEST(OracleTest, SystemWalkMatchesBoardCount) {
  EXPECT_EQ(testing::CountLeavesByWalk(testing::Fixture("tictactoe.game")), 2u * 255168u);
  EXPECT_EQ(testing::CountLeavesByWalk(testing::Fixture("misere.game")), 2u * 255168u);
  EXPECT_EQ(testing::CountLeavesByWalk(testing::Fixture("3to15.game")), 2u * 255168u);
}

TEST(OracleTest, BuiltTreesMatchTheWalk) {
  for (const char* name : {"tictactoe.game", "mini.game", "endofturn.game", "two_starts.game"}) {
    EXPECT_EQ(Leaves(testing::FullForest(name)), testing::CountLeavesByWalk(testing::Fixture(name)))
        << name;
  }
}

TEST(OracleTest, MeasureAgreesWithRecount) {
  testing::Engine rng(101);
  for (int i = 0; i < 300; ++i) {
    GameTree t = testing::RandomTree(rng);
    EXPECT_EQ(Measure(t), testing::OracleMeasure(t));
  }
  for (const auto& name : testing::TreeCorpus()) {
    GameTree t = testing::TreeFixture(name);
    EXPECT_EQ(Measure(t), testing::OracleMeasure(t)) << name;
  }
}

TEST(OracleTest, BruteForceOnHandBuiltTrees) {
  const PinOptions pinned = PinOptions::PlayersAndOutcomes();
  EXPECT_TRUE(testing::BruteForceEquivalent(testing::TreeFixture("fig4a.json"),
                                            testing::TreeFixture("fig4b.json"), pinned));
  GameTree l = testing::TreeFixture("fig5_left.json");
  GameTree r = testing::TreeFixture("fig5_right.json");
  EXPECT_FALSE(testing::BruteForceEquivalent(l, r));
  EXPECT_TRUE(testing::BruteForceEquivalent(Normalize(l), Normalize(r)));
  EXPECT_FALSE(testing::BruteForceEquivalent(Normalize(l), Normalize(r), pinned));
}

// Witness search, canonical keys and the exhaustive oracle agree on small
// trees, both on relabeled copies and on mutated ones.
TEST(OracleTest, BruteForceAgreesWithSearchAndKeys) {
  testing::Engine rng(202);
  testing::RandomTreeOptions opt;
  opt.max_nodes = 24;
  opt.max_depth = 4;
  int positives = 0, negatives = 0;
  for (int i = 0; i < 400; ++i) {
    GameTree a = testing::RandomTree(rng, opt);
    GameTree b = (i % 2 == 0) ? testing::RandomRelabel(a, rng) : testing::Mutate(a, rng);
    bool brute = testing::BruteForceEquivalent(a, b);
    auto w = FindRelabelingWitness(a, b);
    ASSERT_EQ(w.has_value(), brute) << "tree " << i;
    EXPECT_EQ(CanonicalForm(a) == CanonicalForm(b), brute) << "tree " << i;
    if (w) {
      EXPECT_TRUE(VerifyWitness({a}, {b}, *w).empty()) << "tree " << i;
    }
    (brute ? positives : negatives) += 1;
  }
  EXPECT_GT(positives, 200);
  EXPECT_GT(negatives, 50);
}

}  // namespace
}  // namespace ludeq
