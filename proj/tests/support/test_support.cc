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


#include "test_support.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ludeq/dsl.h"
#include "ludeq/tree_builder.h"
#include "ludeq/tree_io.h"

namespace ludeq::testing {

std::string FixturePath(const std::string& name) { return std::string(LUDEQ_FIXTURE_DIR) + "/" + name; }

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const GameSystem& Fixture(const std::string& name) {
  static std::map<std::string, GameSystem> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, ParseFile(FixturePath(name))).first;
  return it->second;
}

const Forest& FullForest(const std::string& name) {
  static std::map<std::string, Forest> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, BuildForest(Fixture(name))).first;
  return it->second;
}

const Forest& DepthForest(const std::string& name, int depth) {
  static std::map<std::pair<std::string, int>, Forest> cache;
  auto key = std::make_pair(name, depth);
  auto it = cache.find(key);
  if (it == cache.end()) {
    BuildOptions opt;
    opt.depth = depth;
    it = cache.emplace(key, BuildForest(Fixture(name), opt)).first;
  }
  return it->second;
}

GameTree TreeFixture(const std::string& name) { return ImportJson(ReadText(FixturePath(name))); }

std::vector<std::string> GameCorpus() {
  return {"tictactoe.game", "3to15.game",     "misere.game", "perturbed.game",      "endofturn.game",
          "fewer_openings.game", "mini.game", "mini_misere.game", "two_starts.game"};
}

std::vector<std::string> TreeCorpus() {
  return {"fig4a.json", "fig4b.json", "fig5_left.json", "fig5_right.json", "fig6_left.json", "fig6_right.json"};
}

int Below(Engine& rng, int n) {
  if (n <= 1) return 0;
  return static_cast<int>(rng() % static_cast<std::uint64_t>(n));
}

// ---- random trees ----

namespace {

const char* kChoiceNames[] = {"a", "b", "c", "d", "e", "f"};

class TreeGen {
 public:
  TreeGen(Engine& rng, const RandomTreeOptions& opt, int players, int outcomes)
      : rng_(rng), opt_(opt), players_(players), outcomes_(outcomes) {
    std::vector<std::string> names, outs;
    for (int p = 0; p < players; ++p) names.push_back("P" + std::to_string(p + 1));
    for (int o = 0; o < outcomes; ++o) outs.push_back("o" + std::to_string(o + 1));
    tree_ = GameTree(names, outs, {});
  }

  GameTree Run() {
    tree_.set_root(Make(2 + Below(rng_, opt_.max_nodes - 1), 0));
    return tree_.Compacted();
  }

 private:
  NodeId Leaf() {
    if (opt_.allow_truncated && Below(rng_, 12) == 0) return tree_.AddNode(NodeKind::kTruncated);
    return tree_.AddNode(NodeKind::kTerminal, -1, Below(rng_, outcomes_));
  }

  // Generates `count` children sharing `budget`; each may replay the
  // previous child's random stream to produce an identical twin.
  std::vector<NodeId> Children(int count, int budget, int depth, bool under_chance = false) {
    std::vector<NodeId> out;
    Engine saved = rng_;
    for (int i = 0; i < count; ++i) {
      if (i > 0 && Below(rng_, 3) == 0) {
        Engine resume = rng_;
        rng_ = saved;
        out.push_back(Make(budget, depth, under_chance));
        rng_ = resume;
      } else {
        saved = rng_;
        out.push_back(Make(budget, depth, under_chance));
      }
    }
    return out;
  }

  // Built trees have a state root and never put a chance node directly
  // under another one.
  NodeId Make(int budget, int depth, bool under_chance = false) {
    if (budget <= 1 || depth >= opt_.max_depth || (depth > 0 && Below(rng_, 16) == 0)) return Leaf();
    int r = Below(rng_, 10);
    if (r < 2 && budget >= 3 && depth > 0 && !under_chance) return Chance(budget, depth);
    return State(budget, depth);
  }

  NodeId Chance(int budget, int depth) {
    int k = 2 + Below(rng_, 2);
    while (k > 2 && budget - 1 < k * 1) --k;
    static const int kDens[] = {2, 3, 4, 6};
    int den = kDens[Below(rng_, 4)];
    if (den < k) den = 4;
    std::vector<int> cuts(den - 1);
    std::iota(cuts.begin(), cuts.end(), 1);
    std::shuffle(cuts.begin(), cuts.end(), rng_);
    cuts.resize(k - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.insert(cuts.begin(), 0);
    cuts.push_back(den);
    NodeId n = tree_.AddNode(NodeKind::kChance);
    std::vector<NodeId> kids = Children(k, (budget - 1) / k, depth + 1, true);
    for (int i = 0; i < k; ++i) tree_.AddChanceEdge(n, kids[i], Probability(cuts[i + 1] - cuts[i], den));
    return n;
  }

  NodeId State(int budget, int depth) {
    NodeId n = tree_.AddNode(NodeKind::kState);
    if (Below(rng_, 10) == 0) {
      NodeId c = Make(budget - 1, depth + 1);
      tree_.AddDecisionEdge(n, c, {});
      return n;
    }
    // Per player: number of choices, 0 = inactive.
    std::vector<int> count(players_, 0);
    bool any = false;
    int owner = Below(rng_, players_);
    bool single = Below(rng_, 2) == 0;
    for (int p = 0; p < players_; ++p) {
      bool active = single ? p == owner : Below(rng_, 2) == 0;
      if (active) {
        count[p] = 1 + Below(rng_, 3);
        any = true;
      }
    }
    if (!any) count[owner] = 1 + Below(rng_, 3);
    int cells = 1;
    for (int p = 0; p < players_; ++p) cells *= std::max(1, count[p]);
    while (cells > 12) {
      for (int p = 0; p < players_; ++p) {
        if (count[p] > 1) {
          --count[p];
          break;
        }
      }
      cells = 1;
      for (int p = 0; p < players_; ++p) cells *= std::max(1, count[p]);
    }
    // Choice symbols: a random subset of the name pool per player.
    std::vector<std::vector<Symbol>> sym(players_);
    for (int p = 0; p < players_; ++p) {
      std::vector<int> pool = {0, 1, 2, 3, 4, 5};
      std::shuffle(pool.begin(), pool.end(), rng_);
      for (int i = 0; i < count[p]; ++i) sym[p].push_back(tree_.InternSymbol(kChoiceNames[pool[i]]));
    }
    int edges = 1 + Below(rng_, std::min({cells, std::max(1, budget - 1), 6}));
    std::vector<int> cell_edge(cells);
    for (int c = 0; c < cells; ++c) cell_edge[c] = c < edges ? c : Below(rng_, edges);
    std::shuffle(cell_edge.begin(), cell_edge.end(), rng_);
    // Joint index decoding, player 0 most significant.
    auto decode = [&](int c) {
      std::vector<int> j(players_, 0);
      for (int p = players_ - 1; p >= 0; --p) {
        int k = std::max(1, count[p]);
        j[p] = c % k;
        c /= k;
      }
      return j;
    };
    auto encode = [&](const std::vector<int>& j) {
      int c = 0;
      for (int p = 0; p < players_; ++p) c = c * std::max(1, count[p]) + j[p];
      return c;
    };
    // A redundant choice: copy row 0 of some player onto row 1.
    if (Below(rng_, 3) == 0) {
      for (int p = 0; p < players_; ++p) {
        if (count[p] < 2) continue;
        for (int c = 0; c < cells; ++c) {
          std::vector<int> j = decode(c);
          if (j[p] != 1) continue;
          j[p] = 0;
          cell_edge[c] = cell_edge[encode(j)];
        }
        break;
      }
    }
    std::map<int, int> dense;
    for (int c = 0; c < cells; ++c) dense.emplace(cell_edge[c], 0);
    int m = 0;
    for (auto& [e, d] : dense) d = m++;
    std::vector<EdgeLabel> labels(m);
    for (int c = 0; c < cells; ++c) {
      std::vector<int> j = decode(c);
      TupleSeq seq(players_, kNullSymbol);
      for (int p = 0; p < players_; ++p)
        if (count[p] > 0) seq[p] = sym[p][j[p]];
      labels[dense[cell_edge[c]]].push_back(seq);
    }
    std::vector<NodeId> kids = Children(m, (budget - 1) / m, depth + 1);
    for (int e = 0; e < m; ++e) {
      std::sort(labels[e].begin(), labels[e].end());
      tree_.AddDecisionEdge(n, kids[e], labels[e]);
    }
    return n;
  }

  Engine& rng_;
  RandomTreeOptions opt_;
  int players_, outcomes_;
  GameTree tree_;
};

}  // namespace

GameTree RandomTree(Engine& rng, const RandomTreeOptions& options) {
  int players = 1 + Below(rng, 3);
  int outcomes = 1 + Below(rng, 3);
  TreeGen gen(rng, options, players, outcomes);
  GameTree t = gen.Run();
  t.SortLabels();
  t.SortChildren();
  return t.Compacted();
}

GameTree RandomRelabel(const GameTree& tree, Engine& rng, const PinOptions& keep) {
  const int np = tree.num_players();
  std::vector<int> perm(np);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::string> players(np);
  for (int p = 0; p < np; ++p)
    players[perm[p]] = keep.players ? tree.players()[p] : "Q" + std::to_string(perm[p]) + "_" + std::to_string(Below(rng, 100));
  const int no = static_cast<int>(tree.outcomes().size());
  std::vector<int> operm(no);
  std::iota(operm.begin(), operm.end(), 0);
  std::shuffle(operm.begin(), operm.end(), rng);
  std::vector<std::string> outcomes(no);
  for (int o = 0; o < no; ++o)
    outcomes[operm[o]] = keep.outcomes ? tree.outcomes()[o] : "w" + std::to_string(operm[o]) + "_" + std::to_string(Below(rng, 100));
  GameTree out(players, outcomes, {});
  std::function<NodeId(NodeId)> copy = [&](NodeId n) -> NodeId {
    const GameTree::Node& node = tree.node(n);
    NodeId m = out.AddNode(node.kind, -1, node.kind == NodeKind::kTerminal ? operm[node.outcome] : -1);
    std::vector<EdgeId> kids = node.children;
    std::shuffle(kids.begin(), kids.end(), rng);
    // Per-player symbol renaming local to this node.
    std::vector<std::map<Symbol, Symbol>> rename(np);
    if (node.kind == NodeKind::kState) {
      for (int p = 0; p < np; ++p) {
        std::set<Symbol> used;
        for (EdgeId e : node.children)
          for (const TupleSeq& seq : tree.edge(e).label)
            for (std::size_t k = p; k < seq.size(); k += np)
              if (seq[k] != kNullSymbol) used.insert(seq[k]);
        std::vector<int> pool(12);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        int i = 0;
        for (Symbol s : used) rename[p][s] = out.InternSymbol("r" + std::to_string(pool[i++]));
      }
    }
    for (EdgeId e : kids) {
      const GameTree::Edge& edge = tree.edge(e);
      NodeId c = copy(edge.to);
      if (edge.kind == EdgeKind::kChance) {
        out.AddChanceEdge(m, c, edge.prob);
        continue;
      }
      EdgeLabel label;
      for (const TupleSeq& seq : edge.label) {
        TupleSeq s2(seq.size(), kNullSymbol);
        for (std::size_t k = 0; k < seq.size(); ++k) {
          int p = static_cast<int>(k % np);
          std::size_t step = k / np;
          if (seq[k] != kNullSymbol) s2[step * np + perm[p]] = rename[p].at(seq[k]);
        }
        label.push_back(std::move(s2));
      }
      out.AddDecisionEdge(m, c, std::move(label));
    }
    return m;
  };
  out.set_root(copy(tree.root()));
  out.SortLabels();
  out.SortChildren();
  return out.Compacted();
}

GameTree Mutate(const GameTree& tree, Engine& rng) {
  GameTree t = tree;
  std::vector<NodeId> order = t.Preorder();
  for (int attempt = 0; attempt < 50; ++attempt) {
    NodeId n = order[Below(rng, static_cast<int>(order.size()))];
    GameTree::Node& node = t.mutable_node(n);
    int kind = Below(rng, 4);
    if (kind == 0 && node.kind == NodeKind::kTerminal && t.outcomes().size() > 1) {
      node.outcome = (node.outcome + 1 + Below(rng, static_cast<int>(t.outcomes().size()) - 1)) %
                     static_cast<int>(t.outcomes().size());
      return t.Compacted();
    }
    if (kind == 1 && node.kind == NodeKind::kChance) {
      GameTree::Edge& e0 = t.mutable_edge(node.children[0]);
      GameTree::Edge& e1 = t.mutable_edge(node.children[1]);
      // Move a small mass between the first two children.
      Probability delta(1, 12);
      if (e1.prob > delta) {
        e0.prob = e0.prob + delta;
        e1.prob = e1.prob - delta;
        t.SortChildren();
        return t.Compacted();
      }
    }
    if (kind == 2 && node.kind == NodeKind::kState && node.children.size() >= 2) {
      GameTree::Edge& from = t.mutable_edge(node.children[0]);
      if (from.label.size() >= 2) {
        TupleSeq seq = from.label.back();
        from.label.pop_back();
        t.mutable_edge(node.children[1]).label.push_back(seq);
        t.SortLabels();
        t.SortChildren();
        return t.Compacted();
      }
    }
    if (kind == 3 && node.kind == NodeKind::kTruncated) {
      node.kind = NodeKind::kTerminal;
      node.outcome = 0;
      return t.Compacted();
    }
  }
  // Fallback: flip the root into a different-outcome leaf.
  GameTree leaf(t.players(), t.outcomes(), {});
  leaf.set_root(leaf.AddNode(NodeKind::kTerminal, -1, 0));
  if (t.node(t.root()).kind == NodeKind::kTerminal && t.node(t.root()).outcome == 0)
    leaf.mutable_node(leaf.root()).kind = NodeKind::kTruncated;
  return leaf.Compacted();
}

// ---- oracles ----

namespace {

bool BoardWin(const int* b, int p) {
  static const int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6},
                                   {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};
  for (const auto& l : kLines)
    if (b[l[0]] == p && b[l[1]] == p && b[l[2]] == p) return true;
  return false;
}

std::uint64_t Games(int* b, int mover, int filled) {
  if (BoardWin(b, 1) || BoardWin(b, 2) || filled == 9) return 1;
  std::uint64_t total = 0;
  for (int i = 0; i < 9; ++i) {
    if (b[i]) continue;
    b[i] = mover;
    total += Games(b, 3 - mover, filled + 1);
    b[i] = 0;
  }
  return total;
}

}  // namespace

std::uint64_t CountTicTacToeGames(bool x_first) {
  int b[9] = {0};
  return Games(b, x_first ? 1 : 2, 0);
}

std::uint64_t CountLeavesByWalk(const GameSystem& sys) {
  std::unordered_map<GameState, std::uint64_t, GameStateHash> memo;
  std::function<std::uint64_t(const GameState&)> walk = [&](const GameState& s) -> std::uint64_t {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    std::uint64_t total = 0;
    if (IsTerminal(sys, s)) {
      total = 1;
    } else {
      for (const DecisionTuple& t : LegalDecisionTuples(sys, s))
        for (const Consequence& c : Consequences(sys, t, s)) total += walk(ApplyActions(sys, c.actions, s));
    }
    memo.emplace(s, total);
    return total;
  };
  std::uint64_t total = 0;
  for (const GameState& s : InitialStates(sys)) total += walk(s);
  return total;
}

namespace {

// Per-player choice sets and the joint-choice -> edge table of a node.
struct Matrix {
  std::vector<std::vector<Choice>> choices;
  std::map<std::vector<Choice>, EdgeId> cells;
  bool empty = false;
};

Matrix ReadMatrix(const GameTree& t, NodeId n) {
  Matrix m;
  const int np = t.num_players();
  m.choices.resize(np);
  const auto& kids = t.node(n).children;
  if (kids.size() == 1 && t.edge(kids[0]).label.empty()) {
    m.empty = true;
    return m;
  }
  std::vector<std::set<Choice>> sets(np);
  for (EdgeId e : kids) {
    for (const TupleSeq& seq : t.edge(e).label) {
      std::vector<Choice> joint(np);
      for (int p = 0; p < np; ++p) {
        Choice c;
        bool any = false;
        for (std::size_t k = p; k < seq.size(); k += np) {
          c.push_back(seq[k]);
          if (seq[k] != kNullSymbol) any = true;
        }
        if (!any) c.clear();
        joint[p] = c;
        sets[p].insert(c);
      }
      m.cells[joint] = e;
    }
  }
  for (int p = 0; p < np; ++p) m.choices[p].assign(sets[p].begin(), sets[p].end());
  return m;
}

class Brute {
 public:
  Brute(const GameTree& a, const GameTree& b, std::vector<int> pi, std::map<int, int> sigma)
      : a_(a), b_(b), pi_(std::move(pi)), sigma_(std::move(sigma)) {}

  bool Eq(NodeId x, NodeId y) {
    auto key = std::make_pair(x, y);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool r = Compute(x, y);
    memo_[key] = r;
    return r;
  }

 private:
  bool Compute(NodeId x, NodeId y) {
    const auto& nx = a_.node(x);
    const auto& ny = b_.node(y);
    if (nx.kind != ny.kind) return false;
    if (nx.children.size() != ny.children.size()) return false;
    switch (nx.kind) {
      case NodeKind::kTruncated: return true;
      case NodeKind::kTerminal: {
        auto it = sigma_.find(nx.outcome);
        return it != sigma_.end() && it->second == ny.outcome;
      }
      case NodeKind::kChance: {
        std::vector<bool> used(ny.children.size(), false);
        return MatchChance(x, y, 0, used);
      }
      case NodeKind::kState: break;
    }
    if (nx.children.empty()) return ny.children.empty();
    Matrix ma = ReadMatrix(a_, x), mb = ReadMatrix(b_, y);
    if (ma.empty || mb.empty) return ma.empty && mb.empty && Eq(a_.edge(nx.children[0]).to, b_.edge(ny.children[0]).to);
    const int np = a_.num_players();
    for (int p = 0; p < np; ++p)
      if (ma.choices[p].size() != mb.choices[pi_[p]].size()) return false;
    // Odometer over per-player permutations.
    std::vector<std::vector<int>> perm(np);
    for (int p = 0; p < np; ++p) {
      perm[p].resize(ma.choices[p].size());
      std::iota(perm[p].begin(), perm[p].end(), 0);
    }
    while (true) {
      if (TryLambda(x, y, ma, mb, perm)) return true;
      int p = 0;
      while (p < np && !std::next_permutation(perm[p].begin(), perm[p].end())) ++p;
      if (p == np) return false;
    }
  }

  bool TryLambda(NodeId x, NodeId y, const Matrix& ma, const Matrix& mb, const std::vector<std::vector<int>>& perm) {
    const int np = a_.num_players();
    std::map<EdgeId, EdgeId> emap, back;
    for (const auto& [joint, ea] : ma.cells) {
      std::vector<Choice> jb(np);
      for (int p = 0; p < np; ++p) {
        auto idx = std::find(ma.choices[p].begin(), ma.choices[p].end(), joint[p]) - ma.choices[p].begin();
        jb[pi_[p]] = mb.choices[pi_[p]][perm[p][idx]];
      }
      auto it = mb.cells.find(jb);
      if (it == mb.cells.end()) return false;
      auto [pos, fresh] = emap.emplace(ea, it->second);
      if (!fresh && pos->second != it->second) return false;
      auto [bpos, bfresh] = back.emplace(it->second, ea);
      if (!bfresh && bpos->second != ea) return false;
    }
    if (emap.size() != a_.node(x).children.size() || back.size() != b_.node(y).children.size()) return false;
    for (const auto& [ea, eb] : emap)
      if (!Eq(a_.edge(ea).to, b_.edge(eb).to)) return false;
    return true;
  }

  bool MatchChance(NodeId x, NodeId y, std::size_t i, std::vector<bool>& used) {
    const auto& kx = a_.node(x).children;
    const auto& ky = b_.node(y).children;
    if (i == kx.size()) return true;
    const auto& ex = a_.edge(kx[i]);
    for (std::size_t j = 0; j < ky.size(); ++j) {
      if (used[j]) continue;
      const auto& ey = b_.edge(ky[j]);
      if (ex.prob != ey.prob || !Eq(ex.to, ey.to)) continue;
      used[j] = true;
      if (MatchChance(x, y, i + 1, used)) return true;
      used[j] = false;
    }
    return false;
  }

  const GameTree& a_;
  const GameTree& b_;
  std::vector<int> pi_;
  std::map<int, int> sigma_;
  std::map<std::pair<NodeId, NodeId>, bool> memo_;
};

std::vector<int> UsedOutcomes(const GameTree& t) {
  std::set<int> used;
  for (NodeId n : t.Preorder())
    if (t.node(n).kind == NodeKind::kTerminal) used.insert(t.node(n).outcome);
  return {used.begin(), used.end()};
}

}  // namespace

bool BruteForceEquivalent(const GameTree& a, const GameTree& b, const PinOptions& pins) {
  const int np = a.num_players();
  if (np != b.num_players()) return false;
  std::vector<int> ua = UsedOutcomes(a), ub = UsedOutcomes(b);
  if (ua.size() != ub.size()) return false;
  std::vector<int> pi(np);
  std::iota(pi.begin(), pi.end(), 0);
  do {
    if (pins.players) {
      bool ok = true;
      for (int p = 0; p < np; ++p) ok = ok && a.players()[p] == b.players()[pi[p]];
      if (!ok) continue;
    }
    std::vector<int> ob = ub;
    std::sort(ob.begin(), ob.end());
    do {
      std::map<int, int> sigma;
      bool ok = true;
      for (std::size_t i = 0; i < ua.size(); ++i) {
        sigma[ua[i]] = ob[i];
        if (pins.outcomes && a.outcomes()[ua[i]] != b.outcomes()[ob[i]]) ok = false;
      }
      if (!ok) continue;
      Brute brute(a, b, pi, sigma);
      if (brute.Eq(a.root(), b.root())) return true;
    } while (std::next_permutation(ob.begin(), ob.end()));
  } while (std::next_permutation(pi.begin(), pi.end()));
  return false;
}

TreeMeasure OracleMeasure(const GameTree& tree) {
  TreeMeasure m;
  std::vector<NodeId> stack = {tree.root()};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    ++m.nodes;
    const auto& node = tree.node(n);
    for (EdgeId e : node.children) stack.push_back(tree.edge(e).to);
    if (node.kind != NodeKind::kState || node.children.empty()) continue;
    Matrix mat = ReadMatrix(tree, n);
    if (mat.empty) continue;
    for (const auto& c : mat.choices) m.choices += c.size();
  }
  return m;
}

namespace {

bool Forced(const GameTree& t, NodeId n) {
  const auto& node = t.node(n);
  return node.kind == NodeKind::kState && node.children.size() == 1 && t.edge(node.children[0]).label.size() <= 1;
}

std::map<int, Probability> Flow(const GameTree& t, const std::vector<int>& cls, NodeId n) {
  const auto& node = t.node(n);
  std::map<int, Probability> out;
  if (node.kind == NodeKind::kChance) {
    for (EdgeId e : node.children)
      for (const auto& [c, p] : Flow(t, cls, t.edge(e).to)) out[c] += p * t.edge(e).prob;
    return out;
  }
  if (Forced(t, n)) return Flow(t, cls, t.edge(node.children[0]).to);
  out[cls[n]] = Probability::One();
  return out;
}

}  // namespace

std::string CheckConservation(const GameTree& before, const ReductionSite& site, const GameTree& after) {
  if (site.kind != ReductionKind::kBookkeeping && site.kind != ReductionKind::kSymmetry) return "";
  CanonicalTable table;
  std::vector<int> ca = SubtreeClasses(before, IdentityAssignment(before), table);
  std::vector<int> cb = SubtreeClasses(after, IdentityAssignment(after), table);
  NodeId anchor = site.root;
  if (site.kind == ReductionKind::kSymmetry && before.node(anchor).kind == NodeKind::kState) {
    std::set<int> kids_a, kids_b;
    std::set<TupleSeq> seqs_a, seqs_b;
    for (EdgeId e : before.node(anchor).children) {
      kids_a.insert(ca[before.edge(e).to]);
      seqs_a.insert(before.edge(e).label.begin(), before.edge(e).label.end());
    }
    for (EdgeId e : after.node(anchor).children) {
      kids_b.insert(cb[after.edge(e).to]);
      seqs_b.insert(after.edge(e).label.begin(), after.edge(e).label.end());
    }
    if (kids_a != kids_b) return "symmetry merge changed the set of child classes";
    if (seqs_a != seqs_b) return "symmetry merge changed the union of decision labels";
    return "";
  }
  while (true) {
    NodeId parent = before.node(anchor).parent;
    if (parent < 0) break;
    if (before.node(parent).kind != NodeKind::kChance && !Forced(before, parent)) break;
    anchor = parent;
  }
  if (static_cast<std::size_t>(anchor) >= after.num_nodes()) return "anchor vanished";
  auto fa = Flow(before, ca, anchor);
  auto fb = Flow(after, cb, anchor);
  if (fa != fb) return "probability flow into untouched subtrees changed below node " + std::to_string(anchor);
  Probability total;
  for (const auto& [c, p] : fb) total += p;
  if (total != Probability::One()) return "flow does not sum to 1";
  return "";
}

std::string TracePlaythrough(const GameSystem& sys, const GameTree& tree, const Playthrough& p) {
  NodeId at = tree.root();
  auto state_of = [&](NodeId n) -> const GameState* {
    int s = tree.node(n).state;
    if (s < 0 || static_cast<std::size_t>(s) >= tree.states().size()) return nullptr;
    return &tree.states()[s];
  };
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const PlayStep& step = p.steps[i];
    const GameState* here = state_of(at);
    if (!here || *here != step.state) return "step " + std::to_string(i) + ": tree node state differs";
    TupleSeq seq;
    for (DecisionId d : step.tuple) {
      if (d == kNullDecision) {
        seq.push_back(kNullSymbol);
        continue;
      }
      auto s = tree.FindSymbol(sys.decisions[d]);
      if (!s) return "step " + std::to_string(i) + ": decision missing from tree";
      seq.push_back(*s);
    }
    NodeId next = -1;
    for (EdgeId e : tree.node(at).children) {
      const auto& lab = tree.edge(e).label;
      if (std::find(lab.begin(), lab.end(), seq) != lab.end()) next = tree.edge(e).to;
    }
    if (next < 0) return "step " + std::to_string(i) + ": no edge carries the tuple";
    if (tree.node(next).kind == NodeKind::kChance) {
      NodeId pick = -1;
      for (EdgeId e : tree.node(next).children) {
        const GameState* s = state_of(tree.edge(e).to);
        if (s && *s == step.successor) {
          pick = tree.edge(e).to;
          break;
        }
      }
      if (pick < 0) return "step " + std::to_string(i) + ": no chance child has the successor";
      next = pick;
    }
    at = next;
  }
  const auto& leaf = tree.node(at);
  if (leaf.kind != NodeKind::kTerminal) return "playthrough ended at a non-terminal node";
  const GameState* fin = state_of(at);
  if (!fin || *fin != p.final_state) return "final state differs";
  if (tree.outcomes()[leaf.outcome] != sys.outcomes[p.outcome]) return "outcome differs";
  return "";
}

}  // namespace ludeq::testing
