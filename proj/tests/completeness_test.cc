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

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

#include "ludeq/completeness.h"
#include "ludeq/dsl.h"
#include "ludeq/game_system.h"
#include "test_support.h"

namespace ludeq {
namespace {

using testing::Fixture;

// Positions (mover, board) of plain tic-tac-toe reachable from an empty
// board with the given first mover.
void Positions(std::array<int, 9>& b, int mover, std::set<std::pair<int, std::array<int, 9>>>& seen) {
  if (!seen.insert({mover, b}).second) return;
  static const int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                   {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  for (const auto& l : kLines) {
    if (b[l[0]] && b[l[0]] == b[l[1]] && b[l[1]] == b[l[2]]) return;
  }
  for (int i = 0; i < 9; ++i) {
    if (b[i]) continue;
    b[i] = mover;
    Positions(b, 3 - mover, seen);
    b[i] = 0;
  }
}

TEST(CompletenessTest, TicTacToeIsCompleteOnReachableStates) {
  CompletenessReport r = CheckCompleteness(Fixture("tictactoe.game"), Scope::kReachable);
  EXPECT_TRUE(r.complete());
  EXPECT_FALSE(r.truncated);
  std::set<std::pair<int, std::array<int, 9>>> seen;
  std::array<int, 9> board{};
  Positions(board, 1, seen);
  Positions(board, 2, seen);
  // Plus the coin-flip start.
  EXPECT_EQ(r.states_checked, seen.size() + 1);
  EXPECT_EQ(ReachableStates(Fixture("tictactoe.game")).size(), seen.size() + 1);
}

TEST(CompletenessTest, EveryCorpusGameIsComplete) {
  for (const auto& name : testing::GameCorpus()) {
    EXPECT_TRUE(CheckCompleteness(Fixture(name), Scope::kReachable).complete()) << name;
  }
}

TEST(CompletenessTest, MissingFlipRuleIsReportedAtTheStart) {
  const GameSystem& g = Fixture("broken.game");
  CompletenessReport r = CheckCompleteness(g, Scope::kReachable);
  ASSERT_EQ(r.violations.size(), 1u);
  const Violation& v = r.violations[0];
  EXPECT_EQ(v.kind, Violation::Kind::kNoRuleMatches);
  EXPECT_EQ(v.state, FormatState(g, InitialStates(g).at(0)));
  EXPECT_EQ(v.tuple, "(flip, flip)");
}

TEST(CompletenessTest, DeletingTheFlipRuleFromTicTacToe) {
  GameSystem g = Fixture("tictactoe.game");
  g.consequence_rules.erase(g.consequence_rules.begin());
  CompletenessReport r = CheckCompleteness(g, Scope::kReachable);
  ASSERT_FALSE(r.complete());
  EXPECT_EQ(r.violations[0].state, FormatState(g, InitialStates(g).at(0)));
  EXPECT_EQ(r.violations[0].tuple, "(flip, flip)");
}

TEST(CompletenessTest, BadProbabilitySum) {
  // The parser rejects it; the checker reports it on a hand-edited system.
  EXPECT_ANY_THROW(Fixture("bad_probability.game"));
  GameSystem g = Fixture("mini.game");
  g.consequence_rules[0].results[1].probability = Probability(1, 3);
  CompletenessReport r = CheckCompleteness(g, Scope::kReachable);
  ASSERT_FALSE(r.complete());
  EXPECT_TRUE(std::any_of(r.violations.begin(), r.violations.end(), [](const Violation& v) {
    return v.kind == Violation::Kind::kProbabilitySum;
  }));
}

TEST(CompletenessTest, EmptyInitialSet) {
  GameSystem g = Fixture("mini.game");
  g.initial = StateSetExpr::False();
  CompletenessReport r = CheckCompleteness(g, Scope::kReachable);
  ASSERT_FALSE(r.complete());
  EXPECT_EQ(r.violations[0].kind, Violation::Kind::kEmptyInitial);
}

TEST(CompletenessTest, AllStatesScopeFindsGapsOffThePlayedPath) {
  // Both players may move at once on states no play reaches.
  const GameSystem& g = Fixture("mini.game");
  CompletenessReport reach = CheckCompleteness(g, Scope::kReachable);
  CompletenessReport all = CheckCompleteness(g, Scope::kAllStates);
  EXPECT_TRUE(reach.complete());
  EXPECT_EQ(all.states_checked, 243u);
  EXPECT_GE(all.states_checked, reach.states_checked);
}

TEST(CompletenessTest, StrictModeWarnsAboutOverlaps) {
  GameSystem g = Parse(R"(
game overlap
players P
track t { a, b }
decisions d
outcomes end
action go { set t = b }
legal P d when t = a
consequence (d) -> go
consequence (*) -> go
outcome default end
init t = a
)");
  CompletenessOptions strict;
  strict.strict = true;
  CompletenessReport r = CheckCompleteness(g, Scope::kReachable, strict);
  EXPECT_TRUE(r.complete());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].kind, Violation::Kind::kAmbiguousRule);
  EXPECT_TRUE(CheckCompleteness(g, Scope::kReachable).warnings.empty());
}

TEST(CompletenessTest, ScopeNames) {
  EXPECT_EQ(ParseScope("all"), Scope::kAllStates);
  EXPECT_EQ(ParseScope("reachable"), Scope::kReachable);
  EXPECT_STREQ(ScopeName(Scope::kAllStates), "all");
  EXPECT_THROW(ParseScope("some"), std::invalid_argument);
}

TEST(ReachableTest, ClosedUnderLegalMoves) {
  const GameSystem& g = Fixture("mini.game");
  auto states = ReachableStates(g);
  EXPECT_TRUE(std::is_sorted(states.begin(), states.end()));
  for (const GameState& s : states) {
    if (IsTerminal(g, s)) continue;
    for (const auto& t : LegalDecisionTuples(g, s)) {
      for (const auto& c : Consequences(g, t, s)) {
        GameState n = ApplyActions(g, c.actions, s);
        EXPECT_TRUE(std::binary_search(states.begin(), states.end(), n));
      }
    }
  }
  EXPECT_TRUE(std::binary_search(states.begin(), states.end(), InitialStates(g).at(0)));
}

}  // namespace
}  // namespace ludeq
