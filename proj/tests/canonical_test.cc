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

#include <map>
#include <string>

#include "ludeq/canonical.h"
#include "ludeq/equivalence.h"
#include "ludeq/reduce.h"
#include "ludeq/tree_builder.h"
#include "ludeq/tree_io.h"
#include "test_support.h"

namespace ludeq {
namespace {

using testing::Engine;
using testing::TreeFixture;

// Subtrees after X's first mark, keyed by cell.
std::map<std::string, GameTree> FirstMoves(std::optional<int> depth) {
  const GameSystem& g = testing::Fixture("tictactoe.game");
  GameState s = InitialStates(g).at(0);
  TrackId turn = *g.FindTrack("turn");
  s.values[turn] = *g.FindValue(turn, "X");
  BuildOptions opt;
  opt.depth = depth;
  GameTree t = BuildTree(g, s, opt);
  std::map<std::string, GameTree> out;
  for (EdgeId e : t.node(t.root()).children) {
    out.emplace(t.FormatLabel(t.edge(e).label).substr(2, 1), t.Subtree(t.edge(e).to));
  }
  return out;
}

TEST(CanonicalTest, CornerOpeningsShareAKey) {
  auto moves = FirstMoves(std::nullopt);
  for (const PinOptions& pins : {PinOptions::None(), PinOptions::PlayersAndOutcomes()}) {
    CanonicalKey k1 = CanonicalForm(moves.at("1"), pins);
    for (const char* c : {"3", "7", "9"}) EXPECT_EQ(CanonicalForm(moves.at(c), pins), k1) << c;
    EXPECT_NE(CanonicalForm(moves.at("5"), pins), k1);
    EXPECT_NE(CanonicalForm(moves.at("2"), pins), k1);
    EXPECT_NE(CanonicalForm(moves.at("2"), pins), CanonicalForm(moves.at("5"), pins));
  }
}

TEST(CanonicalTest, KeysAgreeWithWitnessSearchOnOpenings) {
  auto moves = FirstMoves(3);
  const PinOptions pins = PinOptions::PlayersAndOutcomes();
  for (const auto& [a, ta] : moves) {
    for (const auto& [b, tb] : moves) {
      bool keys = CanonicalForm(ta, pins) == CanonicalForm(tb, pins);
      auto w = FindRelabelingWitness(ta, tb, pins);
      EXPECT_EQ(keys, w.has_value()) << a << " " << b;
      if (w) {
        EXPECT_TRUE(VerifyWitness({ta}, {tb}, *w, pins).empty());
      }
    }
  }
}

TEST(CanonicalTest, StableAcrossExportAndImport) {
  for (const auto& name : testing::TreeCorpus()) {
    GameTree t = TreeFixture(name);
    EXPECT_EQ(CanonicalForm(ImportJson(ExportJson(t))), CanonicalForm(t)) << name;
  }
  const GameTree& mini = testing::FullForest("mini.game").at(0);
  EXPECT_EQ(CanonicalForm(ImportJson(ExportJson(mini))), CanonicalForm(mini));
}

TEST(CanonicalTest, InvariantUnderRelabeling) {
  Engine rng(31);
  for (const auto& name : testing::TreeCorpus()) {
    GameTree t = TreeFixture(name);
    for (int i = 0; i < 20; ++i) {
      EXPECT_EQ(CanonicalForm(testing::RandomRelabel(t, rng)), CanonicalForm(t)) << name;
      const PinOptions pins = PinOptions::PlayersAndOutcomes();
      EXPECT_EQ(CanonicalForm(testing::RandomRelabel(t, rng, pins), pins), CanonicalForm(t, pins)) << name;
    }
  }
}

TEST(CanonicalTest, PinFlagsAreRecorded) {
  GameTree t = TreeFixture("fig4a.json");
  CanonicalKey none = CanonicalForm(t);
  CanonicalKey both = CanonicalForm(t, PinOptions::PlayersAndOutcomes());
  EXPECT_FALSE(none.players_pinned);
  EXPECT_TRUE(both.players_pinned);
  EXPECT_TRUE(both.outcomes_pinned);
  EXPECT_NE(none, both);
}

TEST(CanonicalTest, PinnedPlayersSeparateSwappedRoles) {
  GameTree l = Normalize(TreeFixture("fig5_left.json"));
  GameTree r = Normalize(TreeFixture("fig5_right.json"));
  EXPECT_EQ(CanonicalForm(l), CanonicalForm(r));
  PinOptions players;
  players.players = true;
  EXPECT_NE(CanonicalForm(l, players), CanonicalForm(r, players));
  // An explicit map makes the swapped names count as identical.
  players.player_map = std::map<std::string, std::string>{{"P1", "p2"}, {"P2", "p1"}};
  EXPECT_TRUE(RelabelingEquivalent(l, r, players));
}

TEST(CanonicalTest, ProbabilitiesAreExact) {
  GameTree a = TreeFixture("fig5_left.json");
  std::string text = ExportJson(a);
  std::size_t at = text.find("\"1/3\"");
  ASSERT_NE(at, std::string::npos);
  std::string other = text;
  other.replace(at, 5, "\"2/3\"");
  std::size_t at2 = other.find("\"2/3\"", at + 5);
  ASSERT_NE(at2, std::string::npos);
  other.replace(at2, 5, "\"1/3\"");
  // Swapping the two masses swaps which outcome is likelier.
  EXPECT_NE(CanonicalForm(ImportJson(other), PinOptions::PlayersAndOutcomes()),
            CanonicalForm(a, PinOptions::PlayersAndOutcomes()));
}

TEST(CanonicalTest, ForestKeyIgnoresMemberOrder) {
  Forest f = testing::FullForest("two_starts.game");
  Forest r(f.rbegin(), f.rend());
  EXPECT_EQ(CanonicalForm(f), CanonicalForm(r));
  Forest one{f[0]};
  EXPECT_NE(CanonicalForm(f), CanonicalForm(one));
}

TEST(CanonicalTest, SharedTableClassesAcrossTrees) {
  auto moves = FirstMoves(std::nullopt);
  CanonicalTable table;
  std::vector<int> c1 = SubtreeClasses(moves.at("1"), IdentityAssignment(moves.at("1")), table);
  std::vector<int> c9 = SubtreeClasses(moves.at("9"), IdentityAssignment(moves.at("9")), table);
  std::vector<int> c5 = SubtreeClasses(moves.at("5"), IdentityAssignment(moves.at("5")), table);
  EXPECT_EQ(c1[moves.at("1").root()], c9[moves.at("9").root()]);
  EXPECT_NE(c1[moves.at("1").root()], c5[moves.at("5").root()]);
}

}  // namespace
}  // namespace ludeq
