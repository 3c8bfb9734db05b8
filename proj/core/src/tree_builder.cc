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

#include "ludeq/tree_builder.h"

#include <algorithm>
#include <unordered_map>

#include "ludeq/errors.h"

namespace ludeq {
namespace {

class Builder {
 public:
  Builder(const GameSystem& sys, const BuildOptions& options)
      : sys_(sys),
        options_(options),
        tree_(sys.players, sys.outcomes, sys.decisions) {}

  GameTree Run(const GameState& root) {
    int r = Intern(root);
    stack_.push_back({Item::kState, r, -1, -1, 0, -1, {}, Probability::One()});
    while (!stack_.empty()) {
      Item it = std::move(stack_.back());
      stack_.pop_back();
      if (tree_.num_nodes() >= options_.node_budget) {
        throw BudgetExceededError("tree exceeds the node budget of " +
                                  std::to_string(options_.node_budget) + " nodes");
      }
      if (it.kind == Item::kChance) {
        NodeId c = tree_.AddNode(NodeKind::kChance);
        tree_.AddDecisionEdge(it.parent, c, {std::move(it.tuple)});
        const Branch& b = expansions_[it.state].branches[it.branch];
        for (auto r = b.results.rbegin(); r != b.results.rend(); ++r) {
          stack_.push_back({Item::kState, r->second, c, -1, it.generation, -1, {}, r->first});
        }
        continue;
      }
      NodeId v = CreateStateNode(it);
      if (tree_.node(v).kind != NodeKind::kState) continue;
      const Expansion& x = expansions_[it.state];
      for (int b = static_cast<int>(x.branches.size()) - 1; b >= 0; --b) {
        const Branch& br = x.branches[b];
        if (br.results.size() == 1) {
          stack_.push_back({Item::kState, br.results[0].second, v, b, it.generation + 1, 1,
                            br.tuple, Probability::One()});
        } else {
          stack_.push_back({Item::kChance, it.state, v, b, it.generation + 1, 0, br.tuple,
                            Probability::One()});
        }
      }
    }
    return std::move(tree_);
  }

 private:
  struct Branch {
    TupleSeq tuple;
    std::vector<std::pair<Probability, int>> results;
  };
  struct Expansion {
    bool done = false;
    std::vector<Branch> branches;
  };
  struct Item {
    enum Kind { kState, kChance } kind;
    int state;
    NodeId parent;
    int branch;
    int generation;
    int via_decision;  // 1 when the incoming edge is a decision edge
    TupleSeq tuple;
    Probability prob;
  };

  int Intern(const GameState& s) {
    auto [it, fresh] = index_.try_emplace(s, static_cast<int>(states_.size()));
    if (fresh) {
      states_.push_back(s);
      tree_index_.push_back(-1);
      terminal_.push_back(-1);
      expansions_.emplace_back();
    }
    return it->second;
  }

  bool Terminal(int s) {
    if (terminal_[s] < 0) terminal_[s] = IsTerminal(sys_, states_[s]) ? 1 : 0;
    return terminal_[s] == 1;
  }

  std::int32_t TreeState(int s) {
    if (tree_index_[s] < 0) {
      tree_index_[s] = tree_.InternState(FormatState(sys_, states_[s]), states_[s]);
    }
    return tree_index_[s];
  }

  NodeId CreateStateNode(const Item& it) {
    const int s = it.state;
    NodeId v;
    bool expand = !options_.depth || it.generation <= *options_.depth;
    if (Terminal(s)) {
      v = tree_.AddNode(NodeKind::kTerminal, TreeState(s), Outcome(sys_, states_[s]));
    } else if (!expand) {
      v = tree_.AddNode(NodeKind::kTruncated, TreeState(s));
    } else {
      v = tree_.AddNode(NodeKind::kState, TreeState(s));
      Expand(s);
    }
    if (it.parent >= 0) {
      if (it.via_decision == 1) {
        tree_.AddDecisionEdge(it.parent, v, {it.tuple});
      } else {
        tree_.AddChanceEdge(it.parent, v, it.prob);
      }
    } else {
      tree_.set_root(v);
    }
    return v;
  }

  void Expand(int s) {
    if (expansions_[s].done) return;
    GameState state = states_[s];
    std::vector<Branch> branches;
    for (const DecisionTuple& t : LegalDecisionTuples(sys_, state)) {
      Branch b;
      b.tuple.assign(t.begin(), t.end());  // decision ids double as symbols
      for (const Consequence& c : Consequences(sys_, t, state)) {
        GameState next = ApplyActions(sys_, c.actions, state);
        b.results.emplace_back(c.probability, 0);
        b.results.back().second = Intern(next);
      }
      std::stable_sort(b.results.begin(), b.results.end(),
                       [](const auto& x, const auto& y) { return y.first < x.first; });
      branches.push_back(std::move(b));
    }
    std::sort(branches.begin(), branches.end(), [&](const Branch& a, const Branch& b) {
      return tree_.SeqLess(a.tuple, b.tuple);
    });
    expansions_[s].branches = std::move(branches);
    expansions_[s].done = true;
  }

  const GameSystem& sys_;
  const BuildOptions& options_;
  GameTree tree_;
  std::unordered_map<GameState, int, GameStateHash> index_;
  std::vector<GameState> states_;
  std::vector<std::int32_t> tree_index_;
  std::vector<signed char> terminal_;
  std::vector<Expansion> expansions_;
  std::vector<Item> stack_;
};

}  // namespace

GameTree BuildTree(const GameSystem& sys, const GameState& root, const BuildOptions& options) {
  if (static_cast<int>(root.values.size()) != sys.num_tracks()) {
    throw PreconditionError("root state has the wrong number of tracks");
  }
  for (int t = 0; t < sys.num_tracks(); ++t) {
    if (root.values[t] >= sys.tracks[t].values.size()) {
      throw PreconditionError("root state value out of range on track " + sys.tracks[t].name);
    }
  }
  return Builder(sys, options).Run(root);
}

Forest BuildForest(const GameSystem& sys, const BuildOptions& options) {
  std::vector<GameState> roots = InitialStates(sys);
  if (roots.empty()) throw ValidationError("the initial state set is empty");
  std::sort(roots.begin(), roots.end());
  Forest forest;
  forest.reserve(roots.size());
  for (const GameState& r : roots) forest.push_back(BuildTree(sys, r, options));
  return forest;
}

}  // namespace ludeq
