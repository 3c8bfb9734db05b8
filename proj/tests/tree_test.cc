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
#include <set>
#include <string>

#include "ludeq/dsl.h"
#include "ludeq/errors.h"
#include "ludeq/game_tree.h"
#include "ludeq/tree_builder.h"
#include "ludeq/tree_io.h"
#include "test_support.h"

namespace ludeq {
namespace {

using testing::Fixture;
using testing::TreeFixture;

const GameSystem& Ttt() { return Fixture("tictactoe.game"); }

GameState TttState(const std::map<std::string, std::string>& values) {
  const GameSystem& g = Ttt();
  GameState s = InitialStates(g).at(0);
  for (const auto& [t, v] : values) {
    TrackId id = *g.FindTrack(t);
    s.values[id] = *g.FindValue(id, v);
  }
  return s;
}

TEST(BuildTest, OpeningShape) {
  const GameSystem& g = Ttt();
  BuildOptions opt;
  opt.depth = 1;
  GameTree t = BuildTree(g, InitialStates(g).at(0), opt);
  const auto& root = t.node(t.root());
  EXPECT_EQ(root.kind, NodeKind::kState);
  ASSERT_EQ(root.children.size(), 1u);
  const auto& flip = t.edge(root.children[0]);
  EXPECT_EQ(flip.kind, EdgeKind::kDecision);
  EXPECT_EQ(t.FormatLabel(flip.label), "{(flip, flip)}");
  const auto& chance = t.node(flip.to);
  EXPECT_EQ(chance.kind, NodeKind::kChance);
  EXPECT_EQ(chance.state, -1);
  ASSERT_EQ(chance.children.size(), 2u);
  for (EdgeId e : chance.children) {
    EXPECT_EQ(t.edge(e).kind, EdgeKind::kChance);
    EXPECT_EQ(t.edge(e).prob, Probability(1, 2));
    EXPECT_EQ(t.node(t.edge(e).to).kind, NodeKind::kState);
  }
}

TEST(BuildTest, SingletonConsequenceGoesStraightToAState) {
  BuildOptions opt;
  opt.depth = 1;
  GameTree t = BuildTree(Ttt(), TttState({{"turn", "O"}, {"c1", "X"}}), opt);
  const auto& root = t.node(t.root());
  ASSERT_EQ(root.children.size(), 8u);
  std::set<std::string> labels;
  for (EdgeId e : root.children) {
    EXPECT_EQ(t.node(t.edge(e).to).kind, NodeKind::kState);
    labels.insert(t.FormatLabel(t.edge(e).label));
  }
  EXPECT_EQ(labels.size(), 8u);
  EXPECT_TRUE(labels.count("{(0, 2)}"));
}

TEST(BuildTest, DepthLimitMarksTheFrontier) {
  const GameSystem& g = Ttt();
  for (int d = 0; d <= 3; ++d) {
    BuildOptions opt;
    opt.depth = d;
    GameTree t = BuildTree(g, InitialStates(g).at(0), opt);
    TreeStats s = ComputeStats(t);
    EXPECT_GT(s.truncated_nodes, 0u);
    EXPECT_EQ(s.terminal_nodes, 0u);
    EXPECT_TRUE(t.Validate().empty());
    for (NodeId v : t.Preorder()) {
      if (t.node(v).kind == NodeKind::kTruncated) {
        EXPECT_EQ(t.node(v).outcome, -1);
      }
    }
  }
  BuildOptions zero;
  zero.depth = 0;
  // The root is generation 0 and is always expanded.
  GameTree t = BuildTree(g, InitialStates(g).at(0), zero);
  EXPECT_EQ(t.num_nodes(), 4u);
  EXPECT_EQ(t.node(t.root()).kind, NodeKind::kState);
  EXPECT_EQ(ComputeStats(t).truncated_nodes, 2u);
}

TEST(BuildTest, FullTicTacToeLeaves) {
  const GameTree& t = testing::FullForest("tictactoe.game").at(0);
  TreeStats s = ComputeStats(t);
  std::uint64_t per_branch = testing::CountTicTacToeGames(true);
  EXPECT_EQ(per_branch, 255168u);
  EXPECT_EQ(s.terminal_nodes, 2 * per_branch);
  EXPECT_EQ(s.truncated_nodes, 0u);
  EXPECT_EQ(s.chance_nodes, 1u);
  EXPECT_EQ(s.max_depth, 11u);
}

TEST(BuildTest, BudgetIsEnforced) {
  BuildOptions opt;
  opt.node_budget = 1000;
  EXPECT_THROW(BuildTree(Ttt(), InitialStates(Ttt()).at(0), opt), BudgetExceededError);
}

TEST(BuildTest, IncompleteSystemNamesTheState) {
  const GameSystem& g = Fixture("broken.game");
  try {
    BuildTree(g, InitialStates(g).at(0));
    FAIL();
  } catch (const IncompleteSystemError& e) {
    EXPECT_EQ(e.state(), FormatState(g, InitialStates(g).at(0)));
    EXPECT_EQ(e.tuple(), "(flip, flip)");
  }
}

TEST(BuildTest, TerminalStartIsALoneLeaf) {
  GameSystem g = Parse(R"(
game done
players P
track t { a, b }
decisions d
outcomes over
action stay { set t = a }
legal P d when t = b
consequence (d) -> stay
outcome default over
init t = a
)");
  Forest f = BuildForest(g);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].num_nodes(), 1u);
  EXPECT_EQ(f[0].node(f[0].root()).kind, NodeKind::kTerminal);
  EXPECT_EQ(f[0].outcomes().at(f[0].node(f[0].root()).outcome), "over");
}

TEST(ForestTest, OneTreePerInitialState) {
  EXPECT_EQ(BuildForest(Ttt(), {1}).size(), 1u);
  Forest two = BuildForest(Fixture("two_starts.game"));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].outcomes().at(two[0].node(two[0].Preorder().back()).outcome), "A wins");
  EXPECT_EQ(two[1].outcomes().at(two[1].node(two[1].Preorder().back()).outcome), "B wins");
  GameSystem empty = Fixture("mini.game");
  empty.initial = StateSetExpr::False();
  EXPECT_THROW(BuildForest(empty), ValidationError);
}

TEST(MatrixTest, TicTacToeRoot) {
  BuildOptions opt;
  opt.depth = 1;
  GameTree t = BuildTree(Ttt(), InitialStates(Ttt()).at(0), opt);
  DecisionMatrix m = BuildDecisionMatrix(t, t.root());
  ASSERT_EQ(m.choices.size(), 2u);
  for (const auto& c : m.choices) {
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(t.FormatChoice(c[0]), "flip");
  }
  EXPECT_EQ(m.cells.size(), 1u);
  EXPECT_EQ(NodeOwner(t, t.root()).kind, Ownership::kMultiplayer);
}

TEST(MatrixTest, ThreePlayersOneInactive) {
  GameTree t = TreeFixture("fig4a.json");
  DecisionMatrix m = BuildDecisionMatrix(t, t.root());
  ASSERT_EQ(m.choices.size(), 3u);
  EXPECT_EQ(m.choices[0].size(), 2u);
  ASSERT_EQ(m.choices[1].size(), 1u);
  EXPECT_TRUE(m.choices[1][0].empty());
  EXPECT_EQ(m.choices[2].size(), 3u);
  EXPECT_EQ(m.cells.size(), 6u);
  std::set<EdgeId> image(m.cells.begin(), m.cells.end());
  EXPECT_EQ(image.size(), 4u);
  EXPECT_EQ(m.ActivePlayers(), (std::vector<int>{0, 2}));
  EXPECT_EQ(m.TotalChoices(), 6u);
  // c and e lead to the same edge under both choices of P1.
  auto index = [&](const std::string& name) {
    for (std::size_t i = 0; i < m.choices[2].size(); ++i) {
      if (t.FormatChoice(m.choices[2][i]) == name) return static_cast<int>(i);
    }
    return -1;
  };
  int c = index("c"), d = index("d"), e = index("e");
  ASSERT_GE(c, 0);
  ASSERT_GE(e, 0);
  for (int a = 0; a < 2; ++a) {
    EXPECT_EQ(m.cells[m.CellIndex({a, 0, c})], m.cells[m.CellIndex({a, 0, e})]);
    EXPECT_NE(m.cells[m.CellIndex({a, 0, c})], m.cells[m.CellIndex({a, 0, d})]);
  }
}

TEST(MatrixTest, EmptyDomain) {
  GameTree t = TreeFixture("fig5_left.json");
  NodeId b = t.edge(t.node(t.root()).children[0]).to;
  DecisionMatrix m = BuildDecisionMatrix(t, b);
  EXPECT_TRUE(m.empty_domain);
  EXPECT_EQ(m.cells.size(), 1u);
  EXPECT_EQ(m.TotalChoices(), 0u);
  EXPECT_EQ(NodeOwner(t, b).kind, Ownership::kNone);
}

TEST(MatrixTest, NonStateNodesRejected) {
  GameTree t = TreeFixture("fig5_left.json");
  for (NodeId v : t.Preorder()) {
    if (t.node(v).kind != NodeKind::kState) {
      EXPECT_THROW(BuildDecisionMatrix(t, v), TreeFormatError);
    }
  }
}

TEST(MatrixTest, FreshTreeMatchesLegalSets) {
  const GameSystem& g = Ttt();
  BuildOptions opt;
  opt.depth = 3;
  GameTree t = BuildTree(g, InitialStates(g).at(0), opt);
  ASSERT_EQ(t.states().size(), t.state_labels().size());
  int checked = 0;
  for (NodeId v : t.Preorder()) {
    const auto& n = t.node(v);
    if (n.kind != NodeKind::kState || n.children.empty()) continue;
    DecisionMatrix m = BuildDecisionMatrix(t, v);
    const GameState& s = t.states().at(n.state);
    for (PlayerId p = 0; p < g.num_players(); ++p) {
      std::set<std::string> want, got;
      for (DecisionId d : LegalSet(g, p, s)) want.insert(g.decisions[d]);
      for (const Choice& c : m.choices[p]) {
        if (!c.empty()) got.insert(t.FormatChoice(c));
      }
      EXPECT_EQ(got, want);
    }
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(JsonTest, RoundTrip) {
  BuildOptions opt;
  opt.depth = 3;
  GameTree t = BuildTree(Ttt(), InitialStates(Ttt()).at(0), opt);
  EXPECT_EQ(ImportJson(ExportJson(t)), t);
  EXPECT_EQ(ImportJson(ExportJson(t, 2)), t);
  for (const auto& name : testing::TreeCorpus()) {
    GameTree f = TreeFixture(name);
    EXPECT_TRUE(f.Validate().empty()) << name;
    EXPECT_EQ(ImportJson(ExportJson(f)), f) << name;
  }
  Forest two = BuildForest(Fixture("two_starts.game"));
  EXPECT_EQ(ImportForestJson(ExportForestJson(two)), two);
  EXPECT_EQ(ImportForestJson(ExportJson(two[0])).size(), 1u);
}

TEST(JsonTest, FullTreeRoundTrip) {
  const GameTree& t = testing::FullForest("mini.game").at(0);
  EXPECT_EQ(ImportJson(ExportJson(t)), t);
}

TEST(JsonTest, TruncationMarksSurvive) {
  BuildOptions opt;
  opt.depth = 1;
  GameTree t = BuildTree(Ttt(), InitialStates(Ttt()).at(0), opt);
  std::string text = ExportJson(t);
  EXPECT_NE(text.find("\"truncated\":true"), std::string::npos);
  EXPECT_EQ(ComputeStats(ImportJson(text)).truncated_nodes, 18u);
}

TEST(JsonTest, BadChanceSumIsRejected) {
  const char* doc = R"({"players": ["P"], "root": 0,
    "nodes": [{"id": 0, "kind": "chance"}, {"id": 1, "kind": "terminal", "outcome": "w"},
              {"id": 2, "kind": "terminal", "outcome": "l"}],
    "edges": [{"from": 0, "to": 1, "kind": "chance", "prob": "1/2"},
              {"from": 0, "to": 2, "kind": "chance", "prob": "1/3"}]})";
  try {
    ImportJson(doc);
    FAIL();
  } catch (const TreeFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("0"), std::string::npos);
  }
}

TEST(JsonTest, MalformedDocuments) {
  EXPECT_THROW(ImportJson("{"), TreeFormatError);
  EXPECT_THROW(ImportJson("[]"), TreeFormatError);
  // Cycle.
  EXPECT_THROW(ImportJson(R"({"players": ["P"], "root": 0,
    "nodes": [{"id": 0, "kind": "state"}, {"id": 1, "kind": "state"}],
    "edges": [{"from": 0, "to": 1, "kind": "decision", "tuples": [["a"]]},
              {"from": 1, "to": 0, "kind": "decision", "tuples": [["b"]]}]})"),
               TreeFormatError);
  // Overlapping sibling labels.
  EXPECT_THROW(ImportJson(R"({"players": ["P"], "root": 0,
    "nodes": [{"id": 0, "kind": "state"}, {"id": 1, "kind": "terminal", "outcome": "w"},
              {"id": 2, "kind": "terminal", "outcome": "w"}],
    "edges": [{"from": 0, "to": 1, "kind": "decision", "tuples": [["a"]]},
              {"from": 0, "to": 2, "kind": "decision", "tuples": [["a"]]}]})"),
               TreeFormatError);
  // Terminal without outcome.
  EXPECT_THROW(ImportJson(R"({"players": ["P"], "root": 0,
    "nodes": [{"id": 0, "kind": "terminal"}], "edges": []})"),
               TreeFormatError);
  // Arity mismatch.
  EXPECT_THROW(ImportJson(R"({"players": ["P", "Q"], "root": 0,
    "nodes": [{"id": 0, "kind": "state"}, {"id": 1, "kind": "terminal", "outcome": "w"}],
    "edges": [{"from": 0, "to": 1, "kind": "decision", "tuples": [["a"]]}]})"),
               TreeFormatError);
}

TEST(JsonTest, HandWrittenFixtureTrees) {
  GameTree l = TreeFixture("fig5_left.json");
  GameTree r = TreeFixture("fig5_right.json");
  EXPECT_EQ(l.num_players(), 2);
  EXPECT_EQ(ComputeStats(l).chance_nodes, 1u);
  EXPECT_EQ(r.players(), (std::vector<std::string>{"p1", "p2"}));
}

TEST(DotTest, ShapesAndLabels) {
  BuildOptions opt;
  opt.depth = 1;
  GameTree t = BuildTree(Ttt(), InitialStates(Ttt()).at(0), opt);
  std::string dot = ExportDot(t);
  EXPECT_EQ(dot.rfind("digraph game_tree {", 0), 0u);
  EXPECT_NE(dot.find("shape=circle"), std::string::npos);
  EXPECT_NE(dot.find("1/2"), std::string::npos);
  EXPECT_NE(dot.find("(flip, flip)"), std::string::npos);
  EXPECT_NE(dot.find("turn=start"), std::string::npos);
  DotOptions bare;
  bare.state_labels = false;
  bare.graph_name = "g";
  std::string plain = ExportDot(t, bare);
  EXPECT_EQ(plain.rfind("digraph g {", 0), 0u);
  EXPECT_EQ(plain.find("turn=start"), std::string::npos);
  GameTree leaves = TreeFixture("fig5_left.json");
  EXPECT_NE(ExportDot(leaves).find("o1"), std::string::npos);
}

TEST(TreeTest, CompactedIsPreorderAndCanonical) {
  GameTree t = TreeFixture("fig4a.json");
  GameTree c = t.Compacted();
  std::vector<NodeId> order = c.Preorder();
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], static_cast<NodeId>(i));
  const auto& kids = c.node(c.root()).children;
  for (std::size_t i = 1; i < kids.size(); ++i) {
    EXPECT_TRUE(c.LabelLess(c.edge(kids[i - 1]).label, c.edge(kids[i]).label));
  }
  EXPECT_EQ(c.Compacted(), c);
}

TEST(TreeTest, ProjectAndFormat) {
  // Two steps of a two-player sequence: (a, 0) then (0, b).
  TupleSeq s{0, kNullSymbol, kNullSymbol, 1};
  EXPECT_EQ(Project(s, 2, 0), (Choice{0, kNullSymbol}));
  EXPECT_EQ(Project(s, 2, 1), (Choice{kNullSymbol, 1}));
  EXPECT_TRUE(Project(TupleSeq{kNullSymbol, kNullSymbol}, 2, 0).empty());
  GameTree t({"P", "Q"}, {"w"}, {"a", "b"});
  EXPECT_EQ(t.FormatSeq(s), "(a, 0) (0, b)");
  EXPECT_EQ(t.SymbolName(kNullSymbol), "0");
}

TEST(TreeTest, StatsAddUp) {
  for (const auto& name : testing::GameCorpus()) {
    for (const GameTree& t : testing::DepthForest(name, 3)) {
      TreeStats s = ComputeStats(t);
      EXPECT_EQ(s.nodes, s.state_nodes + s.chance_nodes + s.terminal_nodes + s.truncated_nodes) << name;
      EXPECT_EQ(s.decision_edges + s.chance_edges + 1, s.nodes) << name;
      std::size_t leaves = 0;
      for (std::size_t c : s.outcome_counts) leaves += c;
      EXPECT_EQ(leaves, s.terminal_nodes) << name;
    }
  }
}

}  // namespace
}  // namespace ludeq
