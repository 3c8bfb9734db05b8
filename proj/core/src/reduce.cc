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

#include "ludeq/reduce.h"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "ludeq/canonical.h"
#include "ludeq/errors.h"
#include "ludeq/rng.h"

namespace ludeq {

const char* ReductionName(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::kMatrixRedundancy: return "matrix-redundancy";
    case ReductionKind::kBookkeeping: return "bookkeeping";
    case ReductionKind::kSinglePlayer: return "single-player";
    case ReductionKind::kSymmetry: return "symmetry";
  }
  return "?";
}

const char* BookkeepingCaseName(BookkeepingCase c) {
  switch (c) {
    case BookkeepingCase::kNone: return "";
    case BookkeepingCase::kReplaceByLeaf: return "1";
    case BookkeepingCase::kNewChance: return "2a";
    case BookkeepingCase::kMergeIntoChance: return "2b";
    case BookkeepingCase::kRootChance: return "2c";
  }
  return "?";
}

namespace {

bool HasDecisions(const GameTree& t, NodeId v) {
  const auto& n = t.node(v);
  return n.kind == NodeKind::kState && !n.children.empty();
}

std::size_t NodeChoices(const GameTree& t, NodeId v) {
  if (!HasDecisions(t, v)) return 0;
  DecisionMatrix m = BuildDecisionMatrix(t, v);
  return m.empty_domain ? 0 : m.TotalChoices();
}

bool SingleEdgeState(const GameTree& t, NodeId v) {
  const auto& n = t.node(v);
  return n.kind == NodeKind::kState && n.children.size() == 1 &&
         t.edge(n.children[0]).kind == EdgeKind::kDecision;
}

// ---- Site detection ----

std::optional<ReductionSite> BookkeepingAt(const GameTree& t, NodeId r) {
  if (!SingleEdgeState(t, r)) return std::nullopt;
  // Only the topmost root of a maximal site counts.
  for (NodeId p = t.node(r).parent; p >= 0; p = t.node(p).parent) {
    if (t.node(p).kind == NodeKind::kChance) continue;
    if (SingleEdgeState(t, p)) return std::nullopt;
    break;
  }
  ReductionSite site;
  site.kind = ReductionKind::kBookkeeping;
  site.root = r;
  bool chance = false;
  std::vector<std::pair<NodeId, Probability>> stack{
      {t.edge(t.node(r).children[0]).to, Probability::One()}};
  while (!stack.empty()) {
    auto [v, p] = stack.back();
    stack.pop_back();
    const auto& n = t.node(v);
    if (n.kind == NodeKind::kTruncated) return std::nullopt;
    if (n.kind == NodeKind::kChance) {
      chance = true;
      site.interior.push_back(v);
      for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) {
        stack.emplace_back(t.edge(*it).to, p * t.edge(*it).prob);
      }
    } else if (SingleEdgeState(t, v)) {
      site.interior.push_back(v);
      stack.emplace_back(t.edge(n.children[0]).to, p);
    } else {
      site.leaves.push_back(v);
      site.leaf_probs.push_back(p);
    }
  }
  NodeId parent = t.node(r).parent;
  if (!chance) {
    site.bookkeeping = BookkeepingCase::kReplaceByLeaf;
    site.leaf_probs.clear();
  } else if (parent < 0) {
    site.bookkeeping = BookkeepingCase::kRootChance;
    // Already a root followed by a single chance node over the leaves.
    if (site.interior.size() == 1) return std::nullopt;
  } else if (t.node(parent).kind == NodeKind::kChance) {
    site.bookkeeping = BookkeepingCase::kMergeIntoChance;
  } else {
    site.bookkeeping = BookkeepingCase::kNewChance;
  }
  return site;
}

// Owned by p alone, with no chance children.
bool Extendable(const GameTree& t, NodeId v, int p) {
  if (!HasDecisions(t, v)) return false;
  Owner o = NodeOwner(t, v);
  if (o.kind != Ownership::kSinglePlayer || o.player != p) return false;
  for (EdgeId e : t.node(v).children) {
    if (t.node(t.edge(e).to).kind == NodeKind::kChance) return false;
  }
  return true;
}

bool OwnedBy(const GameTree& t, NodeId v, int p) {
  if (!HasDecisions(t, v)) return false;
  Owner o = NodeOwner(t, v);
  return o.kind == Ownership::kSinglePlayer && o.player == p;
}

// The root may have chance children; those branches stay outside the site.
std::optional<ReductionSite> SinglePlayerAt(const GameTree& t, NodeId r) {
  if (!HasDecisions(t, r)) return std::nullopt;
  Owner o = NodeOwner(t, r);
  if (o.kind != Ownership::kSinglePlayer) return std::nullopt;
  NodeId parent = t.node(r).parent;
  if (parent >= 0 && OwnedBy(t, parent, o.player) && Extendable(t, r, o.player)) return std::nullopt;
  ReductionSite site;
  site.kind = ReductionKind::kSinglePlayer;
  site.root = r;
  site.player = o.player;
  std::vector<NodeId> stack;
  const auto& ch = t.node(r).children;
  for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(t.edge(*it).to);
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (t.node(v).kind == NodeKind::kTruncated) return std::nullopt;
    if (Extendable(t, v, o.player)) {
      site.interior.push_back(v);
      const auto& c = t.node(v).children;
      for (auto it = c.rbegin(); it != c.rend(); ++it) stack.push_back(t.edge(*it).to);
    } else {
      site.leaves.push_back(v);
    }
  }
  if (site.interior.empty()) return std::nullopt;
  return site;
}

// Redundant choice pairs (kept, removed) per player, plus the empty-domain
// conversion when every player is down to one choice.
std::vector<ReductionSite> MatrixSitesAt(const GameTree& t, NodeId w) {
  std::vector<ReductionSite> out;
  if (!HasDecisions(t, w)) return out;
  DecisionMatrix m = BuildDecisionMatrix(t, w);
  if (m.empty_domain) return out;
  const int np = t.num_players();
  bool singletons = true;
  for (int p = 0; p < np; ++p) {
    const int k = static_cast<int>(m.choices[p].size());
    if (k > 1) singletons = false;
    std::size_t inner = 1;
    for (int q = p + 1; q < np; ++q) inner *= m.choices[q].size();
    const std::size_t outer = m.cells.size() / (inner * k);
    auto slice = [&](int c) {
      std::vector<EdgeId> s;
      s.reserve(outer * inner);
      for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t i = 0; i < inner; ++i) s.push_back(m.cells[(o * k + c) * inner + i]);
      }
      return s;
    };
    std::vector<std::vector<EdgeId>> slices;
    for (int c = 0; c < k; ++c) slices.push_back(slice(c));
    std::vector<char> taken(k, 0);
    for (int a = 0; a < k; ++a) {
      if (taken[a]) continue;
      for (int b = a + 1; b < k; ++b) {
        if (taken[b] || slices[a] != slices[b]) continue;
        taken[b] = 1;
        ReductionSite s;
        s.kind = ReductionKind::kMatrixRedundancy;
        s.root = w;
        s.player = p;
        s.kept_choice = m.choices[p][a];
        s.removed_choice = m.choices[p][b];
        out.push_back(std::move(s));
      }
    }
  }
  if (singletons) {
    ReductionSite s;
    s.kind = ReductionKind::kMatrixRedundancy;
    s.root = w;
    s.player = -1;
    out.push_back(std::move(s));
  }
  return out;
}

bool MatrixSiteValid(const GameTree& t, const ReductionSite& s) {
  if (!HasDecisions(t, s.root)) return false;
  DecisionMatrix m = BuildDecisionMatrix(t, s.root);
  if (m.empty_domain) return false;
  const int np = t.num_players();
  if (s.player < 0) {
    for (const auto& c : m.choices) {
      if (c.size() != 1) return false;
    }
    return true;
  }
  if (s.player >= np) return false;
  const auto& cs = m.choices[s.player];
  auto a = std::find(cs.begin(), cs.end(), s.kept_choice);
  auto b = std::find(cs.begin(), cs.end(), s.removed_choice);
  if (a == cs.end() || b == cs.end() || a == b) return false;
  const std::size_t k = cs.size();
  std::size_t inner = 1;
  for (int q = s.player + 1; q < np; ++q) inner *= m.choices[q].size();
  const std::size_t outer = m.cells.size() / (inner * k);
  const std::size_t ia = a - cs.begin(), ib = b - cs.begin();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      if (m.cells[(o * k + ia) * inner + i] != m.cells[(o * k + ib) * inner + i]) return false;
    }
  }
  return true;
}

// Subtrees containing a truncation mark.
std::vector<char> TruncatedBelow(const GameTree& t) {
  std::vector<char> flag(t.num_nodes(), 0);
  auto order = t.Preorder();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const auto& n = t.node(*it);
    char f = n.kind == NodeKind::kTruncated;
    for (EdgeId e : n.children) f |= flag[t.edge(e).to];
    flag[*it] = f;
  }
  return flag;
}

// Groups of non-truncated children with equal classes, in child order.
std::vector<std::vector<NodeId>> SymmetryGroups(const GameTree& t, NodeId x,
                                                const std::vector<int>& cls,
                                                const std::vector<char>& trunc) {
  std::map<int, std::vector<NodeId>> by_class;
  std::vector<int> order;
  for (EdgeId e : t.node(x).children) {
    NodeId c = t.edge(e).to;
    if (trunc[c]) continue;
    auto& g = by_class[cls[c]];
    if (g.empty()) order.push_back(cls[c]);
    g.push_back(c);
  }
  std::vector<std::vector<NodeId>> out;
  for (int k : order) {
    if (by_class[k].size() > 1) out.push_back(by_class[k]);
  }
  return out;
}

// ---- Mutations ----

EdgeLabel Concatenate(const EdgeLabel& a, const EdgeLabel& b) {
  EdgeLabel out;
  out.reserve(a.size() * b.size());
  for (const TupleSeq& x : a) {
    for (const TupleSeq& y : b) {
      TupleSeq s = x;
      s.insert(s.end(), y.begin(), y.end());
      out.push_back(std::move(s));
    }
  }
  return out;
}

void Replace(GameTree& t, NodeId old_node, NodeId new_node) {
  const auto& n = t.node(old_node);
  if (n.in_edge < 0 || n.parent < 0) {
    t.set_root(new_node);
    t.mutable_node(new_node).parent = -1;
    t.mutable_node(new_node).in_edge = -1;
  } else {
    t.Retarget(n.in_edge, new_node);
  }
}

void ApplyBookkeeping(GameTree& t, const ReductionSite& s) {
  const NodeId r = s.root;
  switch (s.bookkeeping) {
    case BookkeepingCase::kReplaceByLeaf:
      Replace(t, r, s.leaves.at(0));
      break;
    case BookkeepingCase::kNewChance: {
      NodeId c = t.AddNode(NodeKind::kChance);
      Replace(t, r, c);
      for (std::size_t i = 0; i < s.leaves.size(); ++i) t.AddChanceEdge(c, s.leaves[i], s.leaf_probs[i]);
      break;
    }
    case BookkeepingCase::kMergeIntoChance: {
      EdgeId in = t.node(r).in_edge;
      NodeId pc = t.node(r).parent;
      Probability pr = t.edge(in).prob;
      t.Unlink(in);
      for (std::size_t i = 0; i < s.leaves.size(); ++i) {
        t.AddChanceEdge(pc, s.leaves[i], pr * s.leaf_probs[i]);
      }
      break;
    }
    case BookkeepingCase::kRootChance: {
      NodeId c = t.AddNode(NodeKind::kChance);
      t.Retarget(t.node(r).children[0], c);
      for (std::size_t i = 0; i < s.leaves.size(); ++i) t.AddChanceEdge(c, s.leaves[i], s.leaf_probs[i]);
      break;
    }
    case BookkeepingCase::kNone:
      throw PreconditionError("bookkeeping site without a case");
  }
}

void ApplySinglePlayer(GameTree& t, const ReductionSite& s) {
  const NodeId r = s.root;
  std::vector<std::pair<NodeId, EdgeLabel>> paths;
  std::vector<char> leaf(t.num_nodes(), 0);
  for (NodeId l : s.leaves) leaf[l] = 1;
  std::vector<std::pair<NodeId, EdgeLabel>> stack{{r, EdgeLabel{TupleSeq{}}}};
  while (!stack.empty()) {
    auto [v, label] = std::move(stack.back());
    stack.pop_back();
    if (v != r && leaf[v]) {
      paths.emplace_back(v, std::move(label));
      continue;
    }
    const auto& ch = t.node(v).children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      stack.emplace_back(t.edge(*it).to, Concatenate(label, t.edge(*it).label));
    }
  }
  t.mutable_node(r).children.clear();
  for (auto& [l, label] : paths) t.AddDecisionEdge(r, l, std::move(label));
}

void ApplyMatrix(GameTree& t, const ReductionSite& s) {
  const int np = t.num_players();
  for (EdgeId e : t.node(s.root).children) {
    auto& label = t.mutable_edge(e).label;
    if (s.player < 0) {
      label.clear();
      continue;
    }
    label.erase(std::remove_if(label.begin(), label.end(),
                               [&](const TupleSeq& q) {
                                 return Project(q, np, s.player) == s.removed_choice;
                               }),
                label.end());
    if (label.empty()) throw PreconditionError("redundant choice emptied an edge");
  }
}

// Returns true when the parent chance node was spliced out.
bool ApplySymmetry(GameTree& t, const ReductionSite& s) {
  const NodeId x = s.root;
  EdgeId keep = t.node(s.kept_child).in_edge;
  EdgeId drop = t.node(s.removed_child).in_edge;
  if (t.node(x).kind == NodeKind::kChance) {
    t.mutable_edge(keep).prob += t.edge(drop).prob;
  } else {
    auto& label = t.mutable_edge(keep).label;
    const auto& other = t.edge(drop).label;
    label.insert(label.end(), other.begin(), other.end());
  }
  t.Unlink(drop);
  if (t.node(x).kind == NodeKind::kChance && t.edge(keep).prob.IsOne()) {
    Replace(t, x, s.kept_child);
    return true;
  }
  return false;
}

std::pair<std::size_t, std::size_t> SubtreeMeasure(const GameTree& t, NodeId root) {
  std::size_t nodes = 0, choices = 0;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    ++nodes;
    choices += NodeChoices(t, v);
    for (EdgeId e : t.node(v).children) stack.push_back(t.edge(e).to);
  }
  return {nodes, choices};
}

// Node and choice change of applying a site, measured on the tree before
// and after the mutation.
class Applier {
 public:
  explicit Applier(GameTree& t) : t_(t) {}

  // Returns (node delta, choices before, choices after) repackaged as the new
  // measure given the old one.
  TreeMeasure Apply(const ReductionSite& s, TreeMeasure m) {
    switch (s.kind) {
      case ReductionKind::kMatrixRedundancy: {
        std::size_t before = NodeChoices(t_, s.root);
        ApplyMatrix(t_, s);
        m.choices = m.choices - before + NodeChoices(t_, s.root);
        break;
      }
      case ReductionKind::kBookkeeping: {
        std::size_t removed_nodes = s.interior.size(), removed_choices = 0;
        for (NodeId v : s.interior) removed_choices += NodeChoices(t_, v);
        if (s.bookkeeping != BookkeepingCase::kRootChance) {
          ++removed_nodes;
          removed_choices += NodeChoices(t_, s.root);
        }
        std::size_t added = s.bookkeeping == BookkeepingCase::kNewChance ||
                            s.bookkeeping == BookkeepingCase::kRootChance;
        ApplyBookkeeping(t_, s);
        m.nodes = m.nodes - removed_nodes + added;
        m.choices -= removed_choices;
        break;
      }
      case ReductionKind::kSinglePlayer: {
        std::size_t removed = NodeChoices(t_, s.root);
        for (NodeId v : s.interior) removed += NodeChoices(t_, v);
        ApplySinglePlayer(t_, s);
        m.nodes -= s.interior.size();
        m.choices = m.choices - removed + NodeChoices(t_, s.root);
        break;
      }
      case ReductionKind::kSymmetry: {
        auto [n, c] = SubtreeMeasure(t_, s.removed_child);
        std::size_t before = NodeChoices(t_, s.root);
        bool spliced = ApplySymmetry(t_, s);
        m.nodes -= n + (spliced ? 1 : 0);
        m.choices = m.choices - c - before + (spliced ? 0 : NodeChoices(t_, s.root));
        break;
      }
    }
    return m;
  }

 private:
  GameTree& t_;
};

std::vector<int> PinnedClasses(const GameTree& t) {
  CanonicalTable table;
  return SubtreeClasses(t, IdentityAssignment(t), table);
}

}  // namespace

TreeMeasure Measure(const GameTree& tree) {
  TreeMeasure m;
  for (NodeId v : tree.Preorder()) {
    ++m.nodes;
    m.choices += NodeChoices(tree, v);
  }
  return m;
}

std::vector<ReductionSite> FindSites(const GameTree& tree, ReductionKind kind) {
  std::vector<ReductionSite> out;
  std::vector<int> cls;
  std::vector<char> trunc;
  if (kind == ReductionKind::kSymmetry) {
    cls = PinnedClasses(tree);
    trunc = TruncatedBelow(tree);
  }
  for (NodeId v : tree.Preorder()) {
    switch (kind) {
      case ReductionKind::kMatrixRedundancy:
        for (auto& s : MatrixSitesAt(tree, v)) out.push_back(std::move(s));
        break;
      case ReductionKind::kBookkeeping:
        if (auto s = BookkeepingAt(tree, v)) out.push_back(std::move(*s));
        break;
      case ReductionKind::kSinglePlayer:
        if (auto s = SinglePlayerAt(tree, v)) out.push_back(std::move(*s));
        break;
      case ReductionKind::kSymmetry:
        for (const auto& g : SymmetryGroups(tree, v, cls, trunc)) {
          for (std::size_t i = 1; i < g.size(); ++i) {
            ReductionSite s;
            s.kind = kind;
            s.root = v;
            s.kept_child = g[0];
            s.removed_child = g[i];
            out.push_back(std::move(s));
          }
        }
        break;
    }
  }
  return out;
}

GameTree ApplyReduction(const GameTree& tree, const ReductionSite& site) {
  auto stale = [&](const std::string& why) {
    return StaleSiteError(std::string(ReductionName(site.kind)) + " site at node " +
                          std::to_string(site.root) + " is stale: " + why);
  };
  if (site.root < 0 || site.root >= static_cast<NodeId>(tree.num_nodes())) throw stale("no such node");
  const auto reachable = tree.Preorder();
  if (std::find(reachable.begin(), reachable.end(), site.root) == reachable.end()) {
    throw stale("node is not in the tree");
  }
  switch (site.kind) {
    case ReductionKind::kMatrixRedundancy:
      if (!MatrixSiteValid(tree, site)) throw stale("choices are not redundant");
      break;
    case ReductionKind::kBookkeeping: {
      auto s = BookkeepingAt(tree, site.root);
      if (!s || !(*s == site)) throw stale("not a maximal bookkeeping subtree");
      break;
    }
    case ReductionKind::kSinglePlayer: {
      auto s = SinglePlayerAt(tree, site.root);
      if (!s || !(*s == site)) throw stale("not a maximal single-player subtree");
      break;
    }
    case ReductionKind::kSymmetry: {
      auto cls = PinnedClasses(tree);
      auto trunc = TruncatedBelow(tree);
      auto is_child = [&](NodeId c) {
        return c >= 0 && c < static_cast<NodeId>(tree.num_nodes()) && tree.node(c).parent == site.root &&
               cls[c] >= 0;
      };
      if (!is_child(site.kept_child) || !is_child(site.removed_child) ||
          site.kept_child == site.removed_child || cls[site.kept_child] != cls[site.removed_child] ||
          trunc[site.kept_child] || trunc[site.removed_child]) {
        throw stale("siblings are not equivalent");
      }
      break;
    }
  }
  GameTree out = tree;
  Applier(out).Apply(site, Measure(tree));
  return out.Compacted();
}

std::string ReductionTrace::ToJson(int indent) const {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["rounds"] = rounds;
  ordered_json steps_json = ordered_json::array();
  for (const auto& st : steps) {
    ordered_json j;
    j["kind"] = ReductionName(st.site.kind);
    j["node"] = st.site.root;
    if (!st.state.empty()) j["state"] = st.state;
    switch (st.site.kind) {
      case ReductionKind::kMatrixRedundancy:
        j["player"] = st.site.player;
        if (st.site.player < 0) j["empty_domain"] = true;
        break;
      case ReductionKind::kBookkeeping:
        j["case"] = BookkeepingCaseName(st.site.bookkeeping);
        j["removed"] = st.site.interior.size();
        j["leaves"] = st.site.leaves.size();
        break;
      case ReductionKind::kSinglePlayer:
        j["player"] = st.site.player;
        j["removed"] = st.site.interior.size();
        j["leaves"] = st.site.leaves.size();
        break;
      case ReductionKind::kSymmetry:
        j["kept"] = st.site.kept_child;
        j["merged"] = st.site.removed_child;
        break;
    }
    j["nodes_before"] = st.nodes_before;
    j["nodes_after"] = st.nodes_after;
    j["choices_before"] = st.choices_before;
    j["choices_after"] = st.choices_after;
    steps_json.push_back(std::move(j));
  }
  doc["steps"] = std::move(steps_json);
  return doc.dump(indent);
}

namespace {

class Normalizer {
 public:
  Normalizer(const GameTree& tree, const NormalizeOptions& options, ReductionTrace* trace)
      : t_(tree), options_(options), trace_(trace), applier_(t_) {
    if (options.shuffle_seed) rng_.emplace(*options.shuffle_seed);
    measure_ = Measure(t_);
  }

  GameTree Run() {
    std::vector<ReductionKind> phases{ReductionKind::kMatrixRedundancy, ReductionKind::kBookkeeping,
                                      ReductionKind::kSinglePlayer, ReductionKind::kSymmetry};
    for (;;) {
      if (rng_) Shuffle(phases);
      bool changed = false;
      for (ReductionKind k : phases) changed |= Pass(k);
      if (trace_) ++trace_->rounds;
      if (!changed) break;
    }
    return t_.Compacted();
  }

 private:
  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_->UniformBelow(i)]);
  }

  void Step(const ReductionSite& s) {
    TreeMeasure before = measure_;
    std::string state;
    if (trace_ && options_.record_trace) {
      std::int32_t st = t_.node(s.root).state;
      if (st >= 0) state = t_.state_labels()[st];
    }
    measure_ = applier_.Apply(s, measure_);
    if (!(measure_ < before)) {
      throw Error(std::string(ReductionName(s.kind)) + " reduction at node " +
                  std::to_string(s.root) + " did not shrink the tree");
    }
    if (trace_ && options_.record_trace) {
      trace_->steps.push_back({s, state, before.nodes, measure_.nodes, before.choices, measure_.choices});
    }
  }

  void PushChildren(std::vector<NodeId>& stack, NodeId v) {
    std::vector<NodeId> kids;
    for (EdgeId e : t_.node(v).children) kids.push_back(t_.edge(e).to);
    if (rng_) Shuffle(kids);
    stack.insert(stack.end(), kids.rbegin(), kids.rend());
  }

  bool Pass(ReductionKind kind) {
    bool changed = false;
    std::vector<int> cls;
    std::vector<char> trunc;
    if (kind == ReductionKind::kSymmetry) {
      cls = PinnedClasses(t_);
      trunc = TruncatedBelow(t_);
    }
    std::vector<NodeId> stack{t_.root()};
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      switch (kind) {
        case ReductionKind::kMatrixRedundancy:
          for (;;) {
            auto sites = MatrixSitesAt(t_, v);
            if (sites.empty()) break;
            ReductionSite s = sites[rng_ ? rng_->UniformBelow(sites.size()) : 0];
            if (rng_ && s.player >= 0 && rng_->UniformBelow(2)) std::swap(s.kept_choice, s.removed_choice);
            Step(s);
            changed = true;
          }
          PushChildren(stack, v);
          break;
        case ReductionKind::kBookkeeping:
        case ReductionKind::kSinglePlayer: {
          auto s = kind == ReductionKind::kBookkeeping ? BookkeepingAt(t_, v) : SinglePlayerAt(t_, v);
          if (!s) {
            PushChildren(stack, v);
            break;
          }
          Step(*s);
          changed = true;
          std::vector<NodeId> leaves = s->leaves;
          if (rng_) Shuffle(leaves);
          stack.insert(stack.end(), leaves.rbegin(), leaves.rend());
          break;
        }
        case ReductionKind::kSymmetry: {
          for (auto& g : SymmetryGroups(t_, v, cls, trunc)) {
            if (rng_) std::swap(g[0], g[rng_->UniformBelow(g.size())]);
            for (std::size_t i = 1; i < g.size(); ++i) {
              ReductionSite s;
              s.kind = kind;
              s.root = v;
              s.kept_child = g[0];
              s.removed_child = g[i];
              Step(s);
              changed = true;
            }
          }
          PushChildren(stack, v);
          break;
        }
      }
    }
    return changed;
  }

  GameTree t_;
  const NormalizeOptions& options_;
  ReductionTrace* trace_;
  Applier applier_;
  std::optional<Rng> rng_;
  TreeMeasure measure_;
};

}  // namespace

GameTree Normalize(const GameTree& tree, const NormalizeOptions& options, ReductionTrace* trace) {
  if (tree.root() < 0) return tree;
  return Normalizer(tree, options, trace).Run();
}

Forest Normalize(const Forest& forest, const NormalizeOptions& options,
                 std::vector<ReductionTrace>* traces) {
  Forest out;
  if (traces) traces->assign(forest.size(), {});
  for (std::size_t i = 0; i < forest.size(); ++i) {
    out.push_back(Normalize(forest[i], options, traces ? &(*traces)[i] : nullptr));
  }
  return out;
}

AgencyResult AgencyEquivalence(const Forest& a, const Forest& b, const PinOptions& pins,
                               const NormalizeOptions& options) {
  AgencyResult r;
  NormalizeOptions quiet = options;
  quiet.record_trace = false;
  r.normal_a = Normalize(a, quiet);
  r.normal_b = Normalize(b, quiet);
  r.witness = FindRelabelingWitness(r.normal_a, r.normal_b, pins);
  return r;
}

AgencyResult AgencyEquivalence(const GameTree& a, const GameTree& b, const PinOptions& pins,
                               const NormalizeOptions& options) {
  return AgencyEquivalence(Forest{a}, Forest{b}, pins, options);
}

}  // namespace ludeq
