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

#include "ludeq/equivalence.h"

#include <algorithm>
#include <numeric>

#include "canonical_internal.h"
#include "ludeq/errors.h"

namespace ludeq {

namespace {

// AHU classes of a skeleton in a shared table.
std::vector<int> ShapeClasses(const Skeleton& s, CanonicalTable& table) {
  std::vector<int> cls(s.children.size(), -1);
  if (s.root < 0) return cls;
  std::vector<NodeId> order;
  std::vector<NodeId> stack{s.root};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (NodeId c : s.children[v]) stack.push_back(c);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    std::vector<std::int64_t> sig;
    for (NodeId c : s.children[*it]) sig.push_back(cls[c]);
    std::sort(sig.begin(), sig.end());
    cls[*it] = table.Intern(sig);
  }
  return cls;
}

}  // namespace

Skeleton Strip(const GameTree& tree) {
  Skeleton s;
  s.children.resize(tree.num_nodes());
  s.root = tree.root();
  for (NodeId v : tree.Preorder()) {
    for (EdgeId e : tree.node(v).children) s.children[v].push_back(tree.edge(e).to);
  }
  return s;
}

bool StructurallyEquivalent(const GameTree& a, const GameTree& b) {
  return StructurallyEquivalent(Forest{a}, Forest{b});
}

bool StructurallyEquivalent(const Forest& a, const Forest& b) {
  if (a.size() != b.size()) return false;
  CanonicalTable table;
  auto roots = [&](const Forest& f) {
    std::vector<int> r;
    for (const GameTree& t : f) {
      Skeleton s = Strip(t);
      r.push_back(s.root < 0 ? -1 : ShapeClasses(s, table)[s.root]);
    }
    std::sort(r.begin(), r.end());
    return r;
  };
  return roots(a) == roots(b);
}

CorrespondenceStream::CorrespondenceStream(const GameTree& a, const GameTree& b)
    : a_(Strip(a)), b_(Strip(b)) {
  CanonicalTable table;
  class_a_ = ShapeClasses(a_, table);
  class_b_ = ShapeClasses(b_, table);
  isomorphic_ = a_.root >= 0 && b_.root >= 0 && class_a_[a_.root] == class_b_[b_.root];
}

// Rebuilds the mapping in DFS order, reusing existing permutation frames and
// appending identity frames for class groups reached for the first time.
bool CorrespondenceStream::Build() {
  current_.assign(a_.children.size(), -1);
  std::size_t frame = 0;
  std::vector<std::pair<NodeId, NodeId>> stack{{a_.root, b_.root}};
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    current_[u] = v;
    std::vector<NodeId> ca = a_.children[u], cb = b_.children[v];
    auto by_a = [&](NodeId x, NodeId y) { return class_a_[x] < class_a_[y]; };
    auto by_b = [&](NodeId x, NodeId y) { return class_b_[x] < class_b_[y]; };
    std::stable_sort(ca.begin(), ca.end(), by_a);
    std::stable_sort(cb.begin(), cb.end(), by_b);
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (std::size_t i = 0; i < ca.size();) {
      std::size_t j = i;
      while (j < ca.size() && class_a_[ca[j]] == class_a_[ca[i]]) ++j;
      if (j - i == 1) {
        pairs.emplace_back(ca[i], cb[i]);
      } else {
        if (frame == frames_.size()) {
          std::vector<int> id(j - i);
          std::iota(id.begin(), id.end(), 0);
          frames_.push_back(id);
        }
        const auto& perm = frames_[frame++];
        for (std::size_t k = 0; k < j - i; ++k) pairs.emplace_back(ca[i + k], cb[i + perm[k]]);
      }
      i = j;
    }
    // Push in reverse so children are visited in order.
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) stack.push_back(*it);
  }
  return true;
}

std::optional<std::vector<NodeId>> CorrespondenceStream::Next() {
  if (!isomorphic_ || done_) return std::nullopt;
  if (started_) {
    std::size_t i = frames_.size();
    while (i > 0 && !std::next_permutation(frames_[i - 1].begin(), frames_[i - 1].end())) --i;
    if (i == 0) {
      done_ = true;
      return std::nullopt;
    }
    frames_.resize(i);
  }
  started_ = true;
  Build();
  return current_;
}

std::optional<std::vector<std::vector<std::pair<int, int>>>> MatchMatrices(
    const DecisionMatrix& a, const DecisionMatrix& b, const std::vector<int>& player_map,
    const std::function<EdgeId(EdgeId)>& edge_map) {
  const std::size_t n = a.choices.size();
  if (b.choices.size() != n || player_map.size() != n || a.empty_domain != b.empty_domain) {
    return std::nullopt;
  }
  if (a.empty_domain) {
    if (edge_map(a.cells[0]) != b.cells[0]) return std::nullopt;
    return std::vector<std::vector<std::pair<int, int>>>(n);
  }
  std::vector<int> identity(n);
  std::iota(identity.begin(), identity.end(), 0);
  internal::MatrixView va = internal::MakeView(a, player_map);
  internal::MatrixView vb = internal::MakeView(b, identity);
  if (va.dims != vb.dims) return std::nullopt;
  std::vector<std::int64_t> xa, xb;
  for (EdgeId e : va.edges) xa.push_back(edge_map(e));
  for (EdgeId e : vb.edges) xb.push_back(e);
  internal::Arrangement ra = internal::Canonicalize(va, xa);
  internal::Arrangement rb = internal::Canonicalize(vb, xb);
  if (ra.seq != rb.seq) return std::nullopt;
  std::vector<std::vector<std::pair<int, int>>> lambda(n);
  for (std::size_t s = 0; s < n; ++s) {
    int p = va.player_at_slot[s];
    for (std::size_t k = 0; k < ra.perm[s].size(); ++k) {
      lambda[p].emplace_back(ra.perm[s][k], rb.perm[s][k]);
    }
    std::sort(lambda[p].begin(), lambda[p].end());
  }
  return lambda;
}

namespace {

// Fills the tree witness top-down from matched classes.
void Correspond(const GameTree& ta, const internal::Canonicalizer& ca, const GameTree& tb,
                const internal::Canonicalizer& cb, const std::vector<int>& player_map,
                TreeWitness& w) {
  w.node_map.assign(ta.num_nodes(), -1);
  w.edge_map.assign(ta.num_edges(), -1);
  std::vector<std::pair<NodeId, NodeId>> stack{{ta.root(), tb.root()}};
  while (!stack.empty()) {
    auto [u, v] = stack.back();
    stack.pop_back();
    w.node_map[u] = v;
    const auto& nu = ta.node(u);
    const auto& nv = tb.node(v);
    auto pair_edge = [&](EdgeId e, EdgeId f) {
      w.edge_map[e] = f;
      stack.emplace_back(ta.edge(e).to, tb.edge(f).to);
    };
    if (nu.kind == NodeKind::kChance) {
      auto sorted = [](const GameTree& t, const internal::Canonicalizer& c, std::vector<EdgeId> es) {
        std::stable_sort(es.begin(), es.end(), [&](EdgeId x, EdgeId y) {
          const auto& ex = t.edge(x);
          const auto& ey = t.edge(y);
          if (ex.prob != ey.prob) return ex.prob < ey.prob;
          return c.Class(ex.to) < c.Class(ey.to);
        });
        return es;
      };
      auto ea = sorted(ta, ca, nu.children);
      auto eb = sorted(tb, cb, nv.children);
      for (std::size_t i = 0; i < ea.size(); ++i) pair_edge(ea[i], eb[i]);
      continue;
    }
    if (nu.kind != NodeKind::kState || nu.children.empty()) continue;
    if (nu.children.size() == 1 && ta.edge(nu.children[0]).label.empty()) {
      w.choice_maps[u] = std::vector<std::vector<std::pair<int, int>>>(ta.num_players());
      pair_edge(nu.children[0], nv.children[0]);
      continue;
    }
    internal::MatrixView va = ca.View(u);
    internal::MatrixView vb = cb.View(v);
    internal::Arrangement ra = ca.Arrange(u);
    internal::Arrangement rb = cb.Arrange(v);
    const std::size_t n = va.dims.size();
    auto& lambda = w.choice_maps[u];
    lambda.assign(n, {});
    for (std::size_t s = 0; s < n; ++s) {
      int p = va.player_at_slot[s];
      for (std::size_t k = 0; k < ra.perm[s].size(); ++k) {
        lambda[p].emplace_back(ra.perm[s][k], rb.perm[s][k]);
      }
      std::sort(lambda[p].begin(), lambda[p].end());
    }
    // Walk positions to pair edges through matching cells.
    std::vector<int> k(n, 0);
    std::vector<char> done(va.edges.size(), 0);
    for (std::size_t pos = 0; pos < va.cells.size(); ++pos) {
      std::size_t ia = 0, ib = 0;
      for (std::size_t s = 0; s < n; ++s) {
        ia = ia * va.dims[s] + ra.perm[s][k[s]];
        ib = ib * vb.dims[s] + rb.perm[s][k[s]];
      }
      int la = va.cells[ia];
      if (!done[la]) {
        done[la] = 1;
        pair_edge(va.edges[la], vb.edges[vb.cells[ib]]);
      }
      for (std::size_t s = n; s-- > 0;) {
        if (++k[s] < va.dims[s]) break;
        k[s] = 0;
      }
    }
  }
  (void)player_map;
}

}  // namespace

std::optional<Witness> FindRelabelingWitness(const Forest& a, const Forest& b,
                                             const PinOptions& pins) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.empty()) return Witness{};
  const int np = a.front().num_players();
  if (b.front().num_players() != np) return std::nullopt;
  for (const Forest* f : {&a, &b}) {
    for (const GameTree& t : *f) {
      if (t.num_players() != np || t.players() != f->front().players() ||
          t.outcomes() != f->front().outcomes()) {
        throw PreconditionError("forest trees must share player and outcome tables");
      }
    }
  }
  CanonicalTable table;
  auto right = internal::Assignments(b, pins, table, internal::PinSide::kRight, &a, false);
  auto left = internal::Assignments(a, pins, table, internal::PinSide::kLeft, &b, true);
  if (!right.feasible || !left.feasible) return std::nullopt;
  if (left.player_profile != right.player_profile ||
      left.outcome_profile != right.outcome_profile) {
    return std::nullopt;
  }
  const LabelAssignment& rb = right.candidates.front();
  // Try name-preserving assignments first so identity maps are preferred.
  {
    const GameTree& a0 = a.front();
    const GameTree& b0 = b.front();
    auto score = [&](const LabelAssignment& x) {
      int s = 0;
      for (int p = 0; p < np; ++p) {
        for (int q = 0; q < np; ++q) {
          if (rb.player_slot[q] == x.player_slot[p] && a0.players()[p] == b0.players()[q]) s += 2;
        }
      }
      for (std::size_t o = 0; o < x.outcome_code.size(); ++o) {
        if (x.outcome_code[o] < 0) continue;
        for (std::size_t q = 0; q < rb.outcome_code.size(); ++q) {
          if (rb.outcome_code[q] == x.outcome_code[o] && a0.outcomes()[o] == b0.outcomes()[q]) ++s;
        }
      }
      return s;
    };
    std::vector<int> scores;
    for (const auto& c : left.candidates) scores.push_back(score(c));
    std::vector<std::size_t> idx(left.candidates.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return scores[x] > scores[y]; });
    std::vector<LabelAssignment> sorted;
    for (std::size_t i : idx) sorted.push_back(left.candidates[i]);
    left.candidates = std::move(sorted);
  }

  auto state_codes = [&](const GameTree& t, LabelAssignment x) {
    if (pins.states) {
      x.state_code.clear();
      for (const auto& s : t.state_labels()) x.state_code.push_back(table.NameCode("state:" + s));
    }
    return x;
  };
  std::vector<LabelAssignment> b_assign;
  std::vector<internal::Canonicalizer> cb;
  b_assign.reserve(b.size());
  cb.reserve(b.size());
  std::vector<std::pair<int, int>> b_roots;
  for (std::size_t i = 0; i < b.size(); ++i) {
    b_assign.push_back(state_codes(b[i], rb));
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    cb.emplace_back(b[i], b_assign[i], table);
    cb.back().Run();
    b_roots.emplace_back(cb.back().Class(b[i].root()), static_cast<int>(i));
  }
  std::sort(b_roots.begin(), b_roots.end());

  for (const auto& cand : left.candidates) {
    std::vector<LabelAssignment> a_assign;
    a_assign.reserve(a.size());
    for (const GameTree& t : a) a_assign.push_back(state_codes(t, cand));
    std::vector<internal::Canonicalizer> ca;
    ca.reserve(a.size());
    std::vector<std::pair<int, int>> a_roots;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ca.emplace_back(a[i], a_assign[i], table);
      ca.back().Run();
      a_roots.emplace_back(ca.back().Class(a[i].root()), static_cast<int>(i));
    }
    std::sort(a_roots.begin(), a_roots.end());
    bool same = true;
    for (std::size_t i = 0; i < a.size() && same; ++i) same = a_roots[i].first == b_roots[i].first;
    if (!same) continue;

    Witness w;
    w.player_map.assign(np, -1);
    for (int p = 0; p < np; ++p) {
      for (int q = 0; q < np; ++q) {
        if (rb.player_slot[q] == cand.player_slot[p]) w.player_map[p] = q;
      }
    }
    for (std::size_t o = 0; o < cand.outcome_code.size(); ++o) {
      if (cand.outcome_code[o] < 0) continue;
      for (std::size_t q = 0; q < rb.outcome_code.size(); ++q) {
        if (rb.outcome_code[q] == cand.outcome_code[o]) w.outcome_map[static_cast<int>(o)] = static_cast<int>(q);
      }
    }
    w.trees.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      int ia = a_roots[i].second, ib = b_roots[i].second;
      TreeWitness& tw = w.trees[ia];
      tw.tree_b = ib;
      Correspond(a[ia], ca[ia], b[ib], cb[ib], w.player_map, tw);
    }
    return w;
  }
  return std::nullopt;
}

std::optional<Witness> FindRelabelingWitness(const GameTree& a, const GameTree& b,
                                             const PinOptions& pins) {
  return FindRelabelingWitness(Forest{a}, Forest{b}, pins);
}

bool RelabelingEquivalent(const GameTree& a, const GameTree& b, const PinOptions& pins) {
  return FindRelabelingWitness(a, b, pins).has_value();
}

bool RelabelingEquivalent(const Forest& a, const Forest& b, const PinOptions& pins) {
  return FindRelabelingWitness(a, b, pins).has_value();
}

}  // namespace ludeq
