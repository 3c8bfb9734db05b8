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

#include "ludeq/game_tree.h"

#include <algorithm>
#include <unordered_map>

#include "ludeq/errors.h"

namespace ludeq {

const char* NodeKindName(NodeKind kind) {
  switch (kind) {
    case NodeKind::kState:
      return "state";
    case NodeKind::kChance:
      return "chance";
    case NodeKind::kTerminal:
      return "terminal";
    case NodeKind::kTruncated:
      return "truncated";
  }
  return "?";
}

GameTree::GameTree(std::vector<std::string> players, std::vector<std::string> outcomes,
                   std::vector<std::string> symbols)
    : players_(std::move(players)), outcomes_(std::move(outcomes)), symbols_(std::move(symbols)) {}

Symbol GameTree::InternSymbol(const std::string& name) {
  if (auto s = FindSymbol(name)) return *s;
  symbols_.push_back(name);
  return static_cast<Symbol>(symbols_.size() - 1);
}

std::optional<Symbol> GameTree::FindSymbol(const std::string& name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i] == name) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

const std::string& GameTree::SymbolName(Symbol s) const {
  static const std::string kNull = "0";
  return s == kNullSymbol ? kNull : symbols_[s];
}

std::int32_t GameTree::InternOutcome(const std::string& name) {
  for (std::size_t i = 0; i < outcomes_.size(); ++i) {
    if (outcomes_[i] == name) return static_cast<std::int32_t>(i);
  }
  outcomes_.push_back(name);
  return static_cast<std::int32_t>(outcomes_.size() - 1);
}

std::int32_t GameTree::InternState(const std::string& label) {
  state_labels_.push_back(label);
  return static_cast<std::int32_t>(state_labels_.size() - 1);
}

std::int32_t GameTree::InternState(const std::string& label, const GameState& state) {
  states_.resize(state_labels_.size());
  states_.push_back(state);
  return InternState(label);
}

NodeId GameTree::AddNode(NodeKind kind, std::int32_t state, std::int32_t outcome) {
  Node n;
  n.kind = kind;
  n.state = state;
  n.outcome = outcome;
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

EdgeId GameTree::AddDecisionEdge(NodeId from, NodeId to, EdgeLabel label) {
  Edge e;
  e.kind = EdgeKind::kDecision;
  e.from = from;
  e.to = to;
  e.label = std::move(label);
  edges_.push_back(std::move(e));
  EdgeId id = static_cast<EdgeId>(edges_.size() - 1);
  nodes_[from].children.push_back(id);
  nodes_[to].parent = from;
  nodes_[to].in_edge = id;
  return id;
}

EdgeId GameTree::AddChanceEdge(NodeId from, NodeId to, Probability prob) {
  Edge e;
  e.kind = EdgeKind::kChance;
  e.from = from;
  e.to = to;
  e.prob = prob;
  edges_.push_back(std::move(e));
  EdgeId id = static_cast<EdgeId>(edges_.size() - 1);
  nodes_[from].children.push_back(id);
  nodes_[to].parent = from;
  nodes_[to].in_edge = id;
  return id;
}

void GameTree::Retarget(EdgeId edge, NodeId to) {
  edges_[edge].to = to;
  nodes_[to].parent = edges_[edge].from;
  nodes_[to].in_edge = edge;
}

void GameTree::Unlink(EdgeId edge) {
  auto& ch = nodes_[edges_[edge].from].children;
  ch.erase(std::remove(ch.begin(), ch.end(), edge), ch.end());
}

bool GameTree::SeqLess(const TupleSeq& a, const TupleSeq& b) const {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == b[i]) continue;
    if (a[i] == kNullSymbol) return true;
    if (b[i] == kNullSymbol) return false;
    int c = symbols_[a[i]].compare(symbols_[b[i]]);
    if (c != 0) return c < 0;
    return a[i] < b[i];
  }
  return a.size() < b.size();
}

bool GameTree::LabelLess(const EdgeLabel& a, const EdgeLabel& b) const {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (SeqLess(a[i], b[i])) return true;
    if (SeqLess(b[i], a[i])) return false;
  }
  return a.size() < b.size();
}

void GameTree::SortLabels() {
  for (Edge& e : edges_) {
    std::sort(e.label.begin(), e.label.end(),
              [&](const TupleSeq& a, const TupleSeq& b) { return SeqLess(a, b); });
  }
}

void GameTree::SortChildren() {
  for (Node& n : nodes_) {
    std::stable_sort(n.children.begin(), n.children.end(), [&](EdgeId x, EdgeId y) {
      const Edge& a = edges_[x];
      const Edge& b = edges_[y];
      if (a.kind != b.kind) return a.kind < b.kind;
      if (a.kind == EdgeKind::kChance) return b.prob < a.prob;
      return LabelLess(a.label, b.label);
    });
  }
}

std::vector<NodeId> GameTree::Preorder() const {
  std::vector<NodeId> order;
  if (root_ < 0) return order;
  std::vector<NodeId> stack{root_};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    const auto& ch = nodes_[v].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(edges_[*it].to);
  }
  return order;
}

std::size_t GameTree::CountReachable() const { return Preorder().size(); }

GameTree GameTree::Subtree(NodeId node) const {
  GameTree copy = *this;
  copy.root_ = node;
  copy.nodes_[node].parent = -1;
  copy.nodes_[node].in_edge = -1;
  return copy.Compacted();
}

GameTree GameTree::Compacted() const {
  GameTree src = *this;
  src.SortLabels();
  src.SortChildren();
  GameTree out(players_, outcomes_, symbols_);
  if (root_ < 0) return out;
  out.nodes_.reserve(nodes_.size());
  out.edges_.reserve(edges_.size());
  std::vector<std::int32_t> state_map(state_labels_.size(), -1);
  bool with_states = states_.size() == state_labels_.size() && !states_.empty();
  struct Item {
    NodeId old;
    NodeId parent;
    EdgeId edge;
  };
  std::vector<Item> stack{{root_, -1, -1}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const Node& n = src.nodes_[it.old];
    std::int32_t state = -1;
    if (n.state >= 0) {
      std::int32_t& m = state_map[n.state];
      if (m < 0) {
        m = with_states ? out.InternState(state_labels_[n.state], states_[n.state])
                        : out.InternState(state_labels_[n.state]);
      }
      state = m;
    }
    NodeId id = out.AddNode(n.kind, state, n.outcome);
    if (it.edge >= 0) {
      const Edge& e = src.edges_[it.edge];
      if (e.kind == EdgeKind::kChance) {
        out.AddChanceEdge(it.parent, id, e.prob);
      } else {
        out.AddDecisionEdge(it.parent, id, e.label);
      }
    } else {
      out.root_ = id;
    }
    for (auto c = n.children.rbegin(); c != n.children.rend(); ++c) {
      stack.push_back({src.edges_[*c].to, id, *c});
    }
  }
  return out;
}

std::string GameTree::FormatSeq(const TupleSeq& seq) const {
  std::string out;
  const std::size_t n = players_.empty() ? 1 : players_.size();
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i % n == 0) out += i ? " (" : "(";
    out += SymbolName(seq[i]);
    out += (i % n == n - 1) ? ")" : ", ";
  }
  return out;
}

std::string GameTree::FormatLabel(const EdgeLabel& label) const {
  if (label.empty()) return "{}";
  std::string out = "{";
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i) out += ", ";
    out += FormatSeq(label[i]);
  }
  return out + "}";
}

std::string GameTree::FormatChoice(const Choice& c) const {
  if (c.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += " ";
    out += SymbolName(c[i]);
  }
  return out;
}

std::vector<std::string> GameTree::Validate() const {
  std::vector<std::string> problems;
  auto fail = [&](NodeId n, const std::string& what) {
    problems.push_back("node " + std::to_string(n) + ": " + what);
  };
  if (root_ < 0 || root_ >= static_cast<NodeId>(nodes_.size())) {
    problems.push_back("tree has no valid root");
    return problems;
  }
  if (nodes_[root_].in_edge >= 0) fail(root_, "root has an incoming edge");
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<NodeId> stack{root_};
  const std::size_t np = players_.size();
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (seen[v]) {
      fail(v, "reached twice (not a tree)");
      continue;
    }
    seen[v] = 1;
    const Node& n = nodes_[v];
    if (n.state >= static_cast<std::int32_t>(state_labels_.size())) fail(v, "bad state index");
    for (EdgeId e : n.children) {
      if (e < 0 || e >= static_cast<EdgeId>(edges_.size())) {
        fail(v, "bad edge id");
        continue;
      }
      const Edge& edge = edges_[e];
      if (edge.from != v) fail(v, "edge " + std::to_string(e) + " has wrong source");
      if (edge.to < 0 || edge.to >= static_cast<NodeId>(nodes_.size())) {
        fail(v, "edge " + std::to_string(e) + " has bad target");
        continue;
      }
      if (nodes_[edge.to].in_edge != e) fail(edge.to, "parent link mismatch");
      stack.push_back(edge.to);
    }
    switch (n.kind) {
      case NodeKind::kTerminal:
      case NodeKind::kTruncated:
        if (!n.children.empty()) fail(v, std::string(NodeKindName(n.kind)) + " node has children");
        if (n.kind == NodeKind::kTerminal &&
            (n.outcome < 0 || n.outcome >= static_cast<std::int32_t>(outcomes_.size()))) {
          fail(v, "terminal node without a valid outcome");
        }
        if (n.kind == NodeKind::kTruncated && n.outcome >= 0) fail(v, "truncated node carries an outcome");
        break;
      case NodeKind::kChance: {
        if (n.outcome >= 0) fail(v, "chance node carries an outcome");
        if (n.state >= 0) fail(v, "chance node carries a state label");
        if (n.children.empty()) fail(v, "chance node has no chance edges");
        Probability total = Probability::Zero();
        bool ok = true;
        for (EdgeId e : n.children) {
          const Edge& edge = edges_[e];
          if (edge.kind != EdgeKind::kChance) {
            fail(v, "chance node has a decision edge");
            ok = false;
            continue;
          }
          if (!edge.prob.IsValidMass()) {
            fail(v, "chance edge probability " + edge.prob.ToString() + " outside (0, 1]");
            ok = false;
            continue;
          }
          try {
            total += edge.prob;
          } catch (const std::exception&) {
            ok = false;
            fail(v, "probability overflow");
          }
        }
        if (ok && !total.IsOne()) fail(v, "chance probabilities sum to " + total.ToString());
        break;
      }
      case NodeKind::kState: {
        if (n.outcome >= 0) fail(v, "state node carries an outcome");
        if (n.children.empty()) {
          fail(v, "non-terminal state node has no decision edges");
          break;
        }
        bool ok = true;
        for (EdgeId e : n.children) {
          const Edge& edge = edges_[e];
          if (edge.kind != EdgeKind::kDecision) {
            fail(v, "state node has a chance edge");
            ok = false;
            continue;
          }
          if (edge.label.empty() && n.children.size() != 1) {
            fail(v, "empty-domain label on a node with several edges");
            ok = false;
          }
          for (const TupleSeq& seq : edge.label) {
            if (seq.empty() || np == 0 || seq.size() % np != 0) {
              fail(v, "tuple sequence length is not a multiple of the player count");
              ok = false;
            }
            for (Symbol s : seq) {
              if (s != kNullSymbol && (s < 0 || s >= static_cast<Symbol>(symbols_.size()))) {
                fail(v, "unknown decision symbol");
                ok = false;
              }
            }
          }
        }
        if (ok) {
          try {
            BuildDecisionMatrix(*this, v);
          } catch (const TreeFormatError& err) {
            problems.push_back(err.what());
          }
        }
        break;
      }
    }
  }
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    if (!seen[v]) fail(static_cast<NodeId>(v), "unreachable from the root");
  }
  return problems;
}

bool GameTree::operator==(const GameTree& o) const {
  return players_ == o.players_ && outcomes_ == o.outcomes_ && symbols_ == o.symbols_ &&
         state_labels_ == o.state_labels_ && nodes_ == o.nodes_ && edges_ == o.edges_ &&
         root_ == o.root_;
}

Choice Project(const TupleSeq& seq, int num_players, int player) {
  Choice c;
  bool any = false;
  for (std::size_t i = player; i < seq.size(); i += num_players) {
    c.push_back(seq[i]);
    any = any || seq[i] != kNullSymbol;
  }
  if (!any) c.clear();
  return c;
}

std::size_t DecisionMatrix::CellIndex(const std::vector<int>& joint) const {
  std::size_t idx = 0;
  for (std::size_t p = 0; p < choices.size(); ++p) idx = idx * choices[p].size() + joint[p];
  return idx;
}

std::vector<int> DecisionMatrix::ActivePlayers() const {
  std::vector<int> out;
  for (std::size_t p = 0; p < choices.size(); ++p) {
    for (const Choice& c : choices[p]) {
      if (!c.empty()) {
        out.push_back(static_cast<int>(p));
        break;
      }
    }
  }
  return out;
}

std::size_t DecisionMatrix::TotalChoices() const {
  std::size_t total = 0;
  for (const auto& c : choices) total += c.size();
  return total;
}

DecisionMatrix BuildDecisionMatrix(const GameTree& tree, NodeId node) {
  const GameTree::Node& n = tree.node(node);
  const std::string where = "node " + std::to_string(node) + ": ";
  if (n.kind != NodeKind::kState || n.children.empty()) {
    throw TreeFormatError(where + "decision matrix requested for a " +
                          NodeKindName(n.kind) + " node without decision edges");
  }
  DecisionMatrix m;
  m.node = node;
  const int np = tree.num_players();
  if (n.children.size() == 1 && tree.edge(n.children[0]).label.empty()) {
    m.empty_domain = true;
    m.choices.assign(np, {});
    m.cells = {n.children[0]};
    return m;
  }
  m.choices.assign(np, {});
  for (EdgeId e : n.children) {
    const auto& edge = tree.edge(e);
    if (edge.kind != EdgeKind::kDecision) throw TreeFormatError(where + "chance edge at a state node");
    if (edge.label.empty()) throw TreeFormatError(where + "empty label beside other edges");
    for (const TupleSeq& seq : edge.label) {
      for (int p = 0; p < np; ++p) m.choices[p].push_back(Project(seq, np, p));
    }
  }
  std::size_t size = 1;
  for (auto& c : m.choices) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (size > (std::size_t{1} << 26) / c.size()) {
      throw TreeFormatError(where + "decision matrix too large");
    }
    size *= c.size();
  }
  m.cells.assign(size, -1);
  std::vector<int> joint(np);
  for (EdgeId e : n.children) {
    for (const TupleSeq& seq : tree.edge(e).label) {
      for (int p = 0; p < np; ++p) {
        Choice c = Project(seq, np, p);
        joint[p] = static_cast<int>(std::lower_bound(m.choices[p].begin(), m.choices[p].end(), c) -
                                    m.choices[p].begin());
      }
      EdgeId& cell = m.cells[m.CellIndex(joint)];
      if (cell >= 0 && cell != e) {
        throw TreeFormatError(where + "joint choice " + tree.FormatSeq(seq) +
                              " labels two sibling edges");
      }
      cell = e;
    }
  }
  for (EdgeId c : m.cells) {
    if (c < 0) throw TreeFormatError(where + "decision matrix is not total");
  }
  return m;
}

Owner NodeOwner(const GameTree& tree, NodeId node) {
  const auto& n = tree.node(node);
  if (n.kind != NodeKind::kState || n.children.empty()) return {};
  DecisionMatrix m = BuildDecisionMatrix(tree, node);
  if (m.empty_domain) return {};
  auto active = m.ActivePlayers();
  if (active.size() == 1) return {Ownership::kSinglePlayer, active[0]};
  if (active.empty()) return {};
  return {Ownership::kMultiplayer, -1};
}

TreeStats ComputeStats(const GameTree& tree) {
  TreeStats s;
  s.outcome_counts.assign(tree.outcomes().size(), 0);
  if (tree.root() < 0) return s;
  std::vector<std::pair<NodeId, std::size_t>> stack{{tree.root(), 0}};
  while (!stack.empty()) {
    auto [v, depth] = stack.back();
    stack.pop_back();
    const auto& n = tree.node(v);
    ++s.nodes;
    s.max_depth = std::max(s.max_depth, depth);
    switch (n.kind) {
      case NodeKind::kState:
        ++s.state_nodes;
        break;
      case NodeKind::kChance:
        ++s.chance_nodes;
        break;
      case NodeKind::kTerminal:
        ++s.terminal_nodes;
        if (n.outcome >= 0 && n.outcome < static_cast<int>(s.outcome_counts.size())) {
          ++s.outcome_counts[n.outcome];
        }
        break;
      case NodeKind::kTruncated:
        ++s.truncated_nodes;
        break;
    }
    for (EdgeId e : n.children) {
      if (tree.edge(e).kind == EdgeKind::kDecision) {
        ++s.decision_edges;
      } else {
        ++s.chance_edges;
      }
      stack.push_back({tree.edge(e).to, depth + 1});
    }
  }
  return s;
}

}  // namespace ludeq
