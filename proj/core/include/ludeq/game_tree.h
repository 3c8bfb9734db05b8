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

#ifndef LUDEQ_GAME_TREE_H_
#define LUDEQ_GAME_TREE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ludeq/game_system.h"
#include "ludeq/probability.h"

namespace ludeq {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
// Interned decision name; kNullSymbol is the null decision.
using Symbol = std::int32_t;
inline constexpr Symbol kNullSymbol = -1;

enum class NodeKind { kState, kChance, kTerminal, kTruncated };
enum class EdgeKind { kDecision, kChance };

const char* NodeKindName(NodeKind kind);

// A sequence of decision tuples flattened step-major: entry k * n + p is
// player p's decision at step k. Fresh trees only hold length-1 sequences.
using TupleSeq = std::vector<Symbol>;
// The set of sequences on one decision edge, kept sorted. Empty means the
// empty-domain matrix.
using EdgeLabel = std::vector<TupleSeq>;

// A player's projection of a tuple sequence. The all-null projection is the
// null choice and is stored as the empty vector.
using Choice = std::vector<Symbol>;

class GameTree {
 public:
  struct Node {
    NodeKind kind = NodeKind::kState;
    std::int32_t state = -1;    // index into state_labels(), or -1
    std::int32_t outcome = -1;  // terminal nodes only
    NodeId parent = -1;
    EdgeId in_edge = -1;
    std::vector<EdgeId> children;

    bool operator==(const Node&) const = default;
  };

  struct Edge {
    EdgeKind kind = EdgeKind::kDecision;
    NodeId from = -1;
    NodeId to = -1;
    Probability prob;  // chance edges only
    EdgeLabel label;   // decision edges only

    bool operator==(const Edge&) const = default;
  };

  GameTree() = default;
  GameTree(std::vector<std::string> players, std::vector<std::string> outcomes,
           std::vector<std::string> symbols);

  int num_players() const { return static_cast<int>(players_.size()); }
  const std::vector<std::string>& players() const { return players_; }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::vector<std::string>& state_labels() const { return state_labels_; }
  // Parallel to state_labels() when the tree came from a system; else empty.
  const std::vector<GameState>& states() const { return states_; }

  NodeId root() const { return root_; }
  void set_root(NodeId root) { root_ = root; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const Node& node(NodeId id) const { return nodes_[id]; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }
  Node& mutable_node(NodeId id) { return nodes_[id]; }
  Edge& mutable_edge(EdgeId id) { return edges_[id]; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Symbol InternSymbol(const std::string& name);
  std::int32_t InternOutcome(const std::string& name);
  std::int32_t InternState(const std::string& label);
  std::int32_t InternState(const std::string& label, const GameState& state);
  std::optional<Symbol> FindSymbol(const std::string& name) const;
  const std::string& SymbolName(Symbol s) const;  // "0" for null

  NodeId AddNode(NodeKind kind, std::int32_t state = -1, std::int32_t outcome = -1);
  EdgeId AddDecisionEdge(NodeId from, NodeId to, EdgeLabel label);
  EdgeId AddChanceEdge(NodeId from, NodeId to, Probability prob);
  // Points an existing edge at a different child (the old child is orphaned).
  void Retarget(EdgeId edge, NodeId to);
  // Detaches an edge from its parent's child list.
  void Unlink(EdgeId edge);

  // Copy holding only nodes reachable from the root, renumbered in preorder
  // with children in canonical order. Tables are kept.
  GameTree Compacted() const;
  // Compacted copy of the subtree rooted at `node`.
  GameTree Subtree(NodeId node) const;
  // Sorts each node's children: decision edges by label, chance edges by
  // descending probability (stable).
  void SortChildren();
  // Sorts sequences inside every decision label.
  void SortLabels();

  // Nodes reachable from the root, in preorder.
  std::vector<NodeId> Preorder() const;
  std::size_t CountReachable() const;

  // Compares sequences by symbol names (null first, then shorter first).
  bool SeqLess(const TupleSeq& a, const TupleSeq& b) const;
  bool LabelLess(const EdgeLabel& a, const EdgeLabel& b) const;
  // "(flip, flip)" style; multi-step sequences joined by spaces.
  std::string FormatSeq(const TupleSeq& seq) const;
  std::string FormatLabel(const EdgeLabel& label) const;
  std::string FormatChoice(const Choice& c) const;

  // Checks every structural invariant; returns a list of problems, each
  // naming the offending node.
  std::vector<std::string> Validate() const;

  bool operator==(const GameTree& other) const;

 private:
  std::vector<std::string> players_;
  std::vector<std::string> outcomes_;
  std::vector<std::string> symbols_;
  std::vector<std::string> state_labels_;
  std::vector<GameState> states_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  NodeId root_ = -1;
};

using Forest = std::vector<GameTree>;

// Player p's projection of a sequence.
Choice Project(const TupleSeq& seq, int num_players, int player);

// The decision matrix D_w of a state node: per-player choice sets and a total
// map from joint choices to outgoing edges.
struct DecisionMatrix {
  NodeId node = -1;
  bool empty_domain = false;
  // choices[p] sorted ascending (null choice first when present).
  std::vector<std::vector<Choice>> choices;
  // Mixed-radix over choices, player 0 most significant. The empty-domain
  // matrix has a single cell.
  std::vector<EdgeId> cells;

  std::size_t CellIndex(const std::vector<int>& joint) const;
  // Players with at least one non-null choice.
  std::vector<int> ActivePlayers() const;
  std::size_t TotalChoices() const;
};

// Throws TreeFormatError when the node is not a state node with children, or
// the labels do not form a total, disjoint map.
DecisionMatrix BuildDecisionMatrix(const GameTree& tree, NodeId node);

enum class Ownership { kNone, kSinglePlayer, kMultiplayer };
struct Owner {
  Ownership kind = Ownership::kNone;
  int player = -1;  // set for kSinglePlayer
};
// kNone for non-state nodes and empty-domain matrices.
Owner NodeOwner(const GameTree& tree, NodeId node);

struct TreeStats {
  std::size_t nodes = 0;
  std::size_t state_nodes = 0;
  std::size_t chance_nodes = 0;
  std::size_t terminal_nodes = 0;
  std::size_t truncated_nodes = 0;
  std::size_t decision_edges = 0;
  std::size_t chance_edges = 0;
  std::size_t max_depth = 0;
  std::vector<std::size_t> outcome_counts;  // leaves per outcome id
};
TreeStats ComputeStats(const GameTree& tree);

}  // namespace ludeq

#endif  // LUDEQ_GAME_TREE_H_
