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

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "ludeq/equivalence.h"
#include "ludeq/errors.h"

namespace ludeq {

namespace {

std::string Where(std::size_t tree, NodeId node) {
  return "tree " + std::to_string(tree) + " node " + std::to_string(node) + ": ";
}

std::string MapName(const std::optional<std::map<std::string, std::string>>& m,
                    const std::string& name) {
  if (!m) return name;
  auto it = m->find(name);
  return it == m->end() ? std::string() : it->second;
}

}  // namespace

std::vector<std::string> VerifyWitness(const Forest& a, const Forest& b, const Witness& w,
                                       const PinOptions& pins) {
  std::vector<std::string> problems;
  auto fail = [&](const std::string& msg) {
    if (problems.size() < 64) problems.push_back(msg);
  };
  if (a.size() != b.size()) fail("forests differ in size");
  if (w.trees.size() != a.size()) fail("witness covers " + std::to_string(w.trees.size()) + " trees");
  if (!problems.empty() || a.empty()) return problems;

  const GameTree& a0 = a.front();
  const GameTree& b0 = b.front();
  const int np = a0.num_players();
  if (b0.num_players() != np || static_cast<int>(w.player_map.size()) != np) {
    fail("player map is not a bijection");
    return problems;
  }
  {
    std::set<int> img(w.player_map.begin(), w.player_map.end());
    if (static_cast<int>(img.size()) != np || *img.begin() < 0 || *img.rbegin() >= np) {
      fail("player map is not a bijection");
      return problems;
    }
  }
  if (pins.players || pins.player_map) {
    for (int p = 0; p < np; ++p) {
      if (MapName(pins.player_map, a0.players()[p]) != b0.players()[w.player_map[p]]) {
        fail("pinned player " + a0.players()[p] + " maps to " + b0.players()[w.player_map[p]]);
      }
    }
  }
  {
    std::set<int> img;
    for (auto [x, y] : w.outcome_map) {
      if (x < 0 || x >= static_cast<int>(a0.outcomes().size()) || y < 0 ||
          y >= static_cast<int>(b0.outcomes().size())) {
        fail("outcome map refers to unknown outcomes");
        return problems;
      }
      if (!img.insert(y).second) fail("outcome map is not injective");
      if ((pins.outcomes || pins.outcome_map) &&
          MapName(pins.outcome_map, a0.outcomes()[x]) != b0.outcomes()[y]) {
        fail("pinned outcome " + a0.outcomes()[x] + " maps to " + b0.outcomes()[y]);
      }
    }
  }
  std::set<int> trees_b;
  for (const auto& tw : w.trees) trees_b.insert(tw.tree_b);
  if (trees_b.size() != a.size() || *trees_b.begin() < 0 ||
      *trees_b.rbegin() >= static_cast<int>(b.size())) {
    fail("tree map is not a bijection");
    return problems;
  }

  for (std::size_t ti = 0; ti < a.size(); ++ti) {
    const GameTree& ta = a[ti];
    const TreeWitness& tw = w.trees[ti];
    const GameTree& tb = b[tw.tree_b];
    if (tw.node_map.size() != ta.num_nodes() || tw.edge_map.size() != ta.num_edges()) {
      fail("tree " + std::to_string(ti) + ": map sizes do not match the tree");
      continue;
    }
    std::vector<NodeId> order = ta.Preorder();
    std::vector<char> reach_b(tb.num_nodes(), 0);
    for (NodeId v : tb.Preorder()) reach_b[v] = 1;
    if (order.size() != tb.CountReachable()) fail("tree " + std::to_string(ti) + ": node counts differ");
    if (tw.node_map[ta.root()] != tb.root()) fail(Where(ti, ta.root()) + "root does not map to root");
    std::vector<char> hit(tb.num_nodes(), 0);
    for (NodeId u : order) {
      NodeId v = tw.node_map[u];
      if (v < 0 || v >= static_cast<NodeId>(tb.num_nodes()) || !reach_b[v]) {
        fail(Where(ti, u) + "maps outside the other tree");
        continue;
      }
      if (hit[v]++) fail(Where(ti, u) + "node map is not injective");
      const auto& nu = ta.node(u);
      const auto& nv = tb.node(v);
      if (nu.kind != nv.kind) {
        fail(Where(ti, u) + std::string(NodeKindName(nu.kind)) + " maps to " + NodeKindName(nv.kind));
        continue;
      }
      if (pins.states) {
        auto label = [](const GameTree& t, std::int32_t s) {
          return s < 0 ? std::string() : t.state_labels()[s];
        };
        if (label(ta, nu.state) != label(tb, nv.state)) fail(Where(ti, u) + "pinned state differs");
      }
      if (nu.kind == NodeKind::kTerminal) {
        auto it = w.outcome_map.find(nu.outcome);
        if (it == w.outcome_map.end() || it->second != nv.outcome) {
          fail(Where(ti, u) + "outcome does not map");
        }
      }
      if (nu.children.size() != nv.children.size()) {
        fail(Where(ti, u) + "child counts differ");
        continue;
      }
      std::set<EdgeId> used;
      for (EdgeId e : nu.children) {
        EdgeId f = tw.edge_map[e];
        if (f < 0 || f >= static_cast<EdgeId>(tb.num_edges()) || tb.edge(f).from != v ||
            std::find(nv.children.begin(), nv.children.end(), f) == nv.children.end()) {
          fail(Where(ti, u) + "edge maps outside the image node");
          continue;
        }
        if (!used.insert(f).second) fail(Where(ti, u) + "edge map is not injective");
        if (tb.edge(f).to != tw.node_map[ta.edge(e).to]) {
          fail(Where(ti, u) + "edge endpoints disagree with the node map");
        }
        if (ta.edge(e).kind != tb.edge(f).kind) fail(Where(ti, u) + "edge kinds differ");
        if (ta.edge(e).kind == EdgeKind::kChance && ta.edge(e).prob != tb.edge(f).prob) {
          fail(Where(ti, u) + "probabilities differ (" + ta.edge(e).prob.ToString() + " vs " +
               tb.edge(f).prob.ToString() + ")");
        }
      }
      if (nu.kind != NodeKind::kState || nu.children.empty()) continue;
      DecisionMatrix da, db;
      try {
        da = BuildDecisionMatrix(ta, u);
        db = BuildDecisionMatrix(tb, v);
      } catch (const TreeFormatError& err) {
        fail(Where(ti, u) + err.what());
        continue;
      }
      if (da.empty_domain != db.empty_domain) {
        fail(Where(ti, u) + "empty-domain matrix maps to a non-empty one");
        continue;
      }
      if (da.empty_domain) continue;
      auto cm = tw.choice_maps.find(u);
      if (cm == tw.choice_maps.end() || static_cast<int>(cm->second.size()) != np) {
        fail(Where(ti, u) + "missing decision bijection");
        continue;
      }
      std::vector<std::vector<int>> lambda(np);
      bool ok = true;
      for (int p = 0; p < np && ok; ++p) {
        const int q = w.player_map[p];
        const int na = static_cast<int>(da.choices[p].size());
        const int nb = static_cast<int>(db.choices[q].size());
        lambda[p].assign(na, -1);
        std::set<int> img;
        for (auto [x, y] : cm->second[p]) {
          if (x < 0 || x >= na || y < 0 || y >= nb || lambda[p][x] >= 0 || !img.insert(y).second) {
            ok = false;
            break;
          }
          lambda[p][x] = y;
        }
        ok = ok && static_cast<int>(img.size()) == na && na == nb;
      }
      if (!ok) {
        fail(Where(ti, u) + "decision map is not a bijection");
        continue;
      }
      std::vector<int> joint(np, 0), image(np);
      for (std::size_t idx = 0; idx < da.cells.size(); ++idx) {
        for (int p = 0; p < np; ++p) image[w.player_map[p]] = lambda[p][joint[p]];
        if (db.cells[db.CellIndex(image)] != tw.edge_map[da.cells[idx]]) {
          fail(Where(ti, u) + "matrices do not match under the decision map");
          break;
        }
        for (int p = np; p-- > 0;) {
          if (++joint[p] < static_cast<int>(da.choices[p].size())) break;
          joint[p] = 0;
        }
      }
    }
  }
  return problems;
}

Witness Invert(const Witness& w, const Forest& a, const Forest& b) {
  Witness inv;
  inv.player_map.assign(w.player_map.size(), -1);
  for (std::size_t p = 0; p < w.player_map.size(); ++p) inv.player_map[w.player_map[p]] = static_cast<int>(p);
  for (auto [x, y] : w.outcome_map) inv.outcome_map[y] = x;
  inv.trees.resize(b.size());
  for (std::size_t i = 0; i < w.trees.size(); ++i) {
    const TreeWitness& tw = w.trees[i];
    TreeWitness& out = inv.trees[tw.tree_b];
    const GameTree& tb = b[tw.tree_b];
    out.tree_b = static_cast<int>(i);
    out.node_map.assign(tb.num_nodes(), -1);
    out.edge_map.assign(tb.num_edges(), -1);
    (void)a;
    for (std::size_t u = 0; u < tw.node_map.size(); ++u) {
      if (tw.node_map[u] >= 0) out.node_map[tw.node_map[u]] = static_cast<NodeId>(u);
    }
    for (std::size_t e = 0; e < tw.edge_map.size(); ++e) {
      if (tw.edge_map[e] >= 0) out.edge_map[tw.edge_map[e]] = static_cast<EdgeId>(e);
    }
    for (const auto& [u, maps] : tw.choice_maps) {
      auto& dst = out.choice_maps[tw.node_map[u]];
      dst.assign(maps.size(), {});
      for (std::size_t p = 0; p < maps.size(); ++p) {
        auto& list = dst[w.player_map[p]];
        for (auto [x, y] : maps[p]) list.emplace_back(y, x);
        std::sort(list.begin(), list.end());
      }
    }
  }
  return inv;
}

Witness Compose(const Witness& ab, const Witness& bc) {
  Witness out;
  out.player_map.resize(ab.player_map.size());
  for (std::size_t p = 0; p < ab.player_map.size(); ++p) out.player_map[p] = bc.player_map[ab.player_map[p]];
  for (auto [x, y] : ab.outcome_map) {
    auto it = bc.outcome_map.find(y);
    if (it != bc.outcome_map.end()) out.outcome_map[x] = it->second;
  }
  out.trees.resize(ab.trees.size());
  for (std::size_t i = 0; i < ab.trees.size(); ++i) {
    const TreeWitness& t1 = ab.trees[i];
    const TreeWitness& t2 = bc.trees.at(t1.tree_b);
    TreeWitness& t = out.trees[i];
    t.tree_b = t2.tree_b;
    t.node_map.assign(t1.node_map.size(), -1);
    t.edge_map.assign(t1.edge_map.size(), -1);
    for (std::size_t u = 0; u < t1.node_map.size(); ++u) {
      if (t1.node_map[u] >= 0) t.node_map[u] = t2.node_map[t1.node_map[u]];
    }
    for (std::size_t e = 0; e < t1.edge_map.size(); ++e) {
      if (t1.edge_map[e] >= 0) t.edge_map[e] = t2.edge_map[t1.edge_map[e]];
    }
    for (const auto& [u, maps] : t1.choice_maps) {
      auto it = t2.choice_maps.find(t1.node_map[u]);
      if (it == t2.choice_maps.end()) continue;
      auto& dst = t.choice_maps[u];
      dst.assign(maps.size(), {});
      for (std::size_t p = 0; p < maps.size(); ++p) {
        std::map<int, int> second(it->second[ab.player_map[p]].begin(),
                                  it->second[ab.player_map[p]].end());
        for (auto [x, y] : maps[p]) dst[p].emplace_back(x, second.at(y));
      }
    }
  }
  return out;
}

std::string WitnessToJson(const Witness& w, const Forest& a, const Forest& b, int indent) {
  using nlohmann::ordered_json;
  ordered_json doc = ordered_json::object();
  if (a.empty()) return doc.dump(indent);
  const GameTree& a0 = a.front();
  const GameTree& b0 = b.front();
  ordered_json players = ordered_json::object();
  for (std::size_t p = 0; p < w.player_map.size(); ++p) {
    players[a0.players()[p]] = b0.players()[w.player_map[p]];
  }
  ordered_json outcomes = ordered_json::object();
  for (auto [x, y] : w.outcome_map) outcomes[a0.outcomes()[x]] = b0.outcomes()[y];
  doc["players"] = players;
  doc["outcomes"] = outcomes;
  ordered_json trees = ordered_json::array();
  for (std::size_t i = 0; i < w.trees.size(); ++i) {
    const TreeWitness& tw = w.trees[i];
    const GameTree& ta = a[i];
    const GameTree& tb = b[tw.tree_b];
    ordered_json t;
    t["a"] = i;
    t["b"] = tw.tree_b;
    ordered_json nodes = ordered_json::array();
    for (NodeId u : ta.Preorder()) nodes.push_back({u, tw.node_map[u]});
    t["nodes"] = nodes;
    ordered_json choices = ordered_json::array();
    for (const auto& [u, maps] : tw.choice_maps) {
      if (maps.empty()) continue;
      DecisionMatrix da = BuildDecisionMatrix(ta, u);
      DecisionMatrix db = BuildDecisionMatrix(tb, tw.node_map[u]);
      if (da.empty_domain) continue;
      for (std::size_t p = 0; p < maps.size(); ++p) {
        ordered_json m = ordered_json::array();
        for (auto [x, y] : maps[p]) {
          m.push_back({ta.FormatChoice(da.choices[p][x]),
                       tb.FormatChoice(db.choices[w.player_map[p]][y])});
        }
        choices.push_back({{"node", u}, {"player", a0.players()[p]}, {"map", m}});
      }
    }
    t["choices"] = choices;
    trees.push_back(t);
  }
  doc["trees"] = trees;
  return doc.dump(indent);
}

}  // namespace ludeq
