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

#include "ludeq/canonical.h"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <sstream>

#include "canonical_internal.h"
#include "ludeq/errors.h"

namespace ludeq {

std::size_t CanonicalTable::Hash::operator()(const std::vector<std::int64_t>& v) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ v.size();
  for (std::int64_t x : v) {
    h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

int CanonicalTable::Intern(const std::vector<std::int64_t>& signature) {
  auto [it, inserted] = index_.try_emplace(signature, static_cast<int>(signatures_.size()));
  if (inserted) signatures_.push_back(signature);
  return it->second;
}

std::optional<int> CanonicalTable::Find(const std::vector<std::int64_t>& signature) const {
  auto it = index_.find(signature);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::int64_t> CanonicalTable::FindName(const std::string& name) const {
  auto it = name_index_.find(name);
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

std::int64_t CanonicalTable::NameCode(const std::string& name) {
  auto [it, inserted] = name_index_.try_emplace(name, static_cast<std::int64_t>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

LabelAssignment IdentityAssignment(const GameTree& tree) {
  LabelAssignment a;
  a.player_slot.resize(tree.num_players());
  std::iota(a.player_slot.begin(), a.player_slot.end(), 0);
  a.outcome_code.resize(tree.outcomes().size());
  std::iota(a.outcome_code.begin(), a.outcome_code.end(), 0);
  return a;
}

std::vector<int> SubtreeClasses(const GameTree& tree, const LabelAssignment& assignment,
                                CanonicalTable& table) {
  internal::Canonicalizer c(tree, assignment, table);
  c.Run();
  return c.classes();
}

namespace internal {

namespace {

enum SigTag : std::int64_t { kTagTerminal = 1, kTagTruncated, kTagChance, kTagEmpty, kTagMatrix };

// Row-major position -> original cell index under an arrangement.
class Evaluator {
 public:
  Evaluator(const MatrixView& view, const std::vector<std::int64_t>& value)
      : view_(view), value_(value) {}

  void Sequence(const std::vector<std::vector<int>>& perm,
                std::vector<std::pair<std::int64_t, int>>& out) const {
    const std::size_t n = view_.dims.size();
    out.clear();
    out.reserve(view_.cells.size());
    std::vector<int> seen(view_.edges.size(), -1);
    int next = 0;
    std::vector<int> k(n, 0);
    for (std::size_t pos = 0; pos < view_.cells.size(); ++pos) {
      std::size_t idx = 0;
      for (std::size_t s = 0; s < n; ++s) idx = idx * view_.dims[s] + perm[s][k[s]];
      int e = view_.cells[idx];
      if (seen[e] < 0) seen[e] = next++;
      out.emplace_back(value_[e], seen[e]);
      for (std::size_t s = n; s-- > 0;) {
        if (++k[s] < view_.dims[s]) break;
        k[s] = 0;
      }
    }
  }

 private:
  const MatrixView& view_;
  const std::vector<std::int64_t>& value_;
};

std::vector<int> Strides(const std::vector<int>& dims) {
  std::vector<int> stride(dims.size(), 1);
  for (std::size_t s = dims.size(); s-- > 1;) stride[s - 1] = stride[s] * dims[s];
  return stride;
}

Arrangement OneAxis(const MatrixView& view, const std::vector<std::int64_t>& value) {
  const std::size_t n = view.dims.size();
  Arrangement arr;
  arr.perm.resize(n);
  int axis = -1;
  for (std::size_t s = 0; s < n; ++s) {
    if (view.dims[s] > 1) axis = static_cast<int>(s);
    arr.perm[s] = {0};
  }
  if (axis >= 0) {
    // Cells are the choices of that axis, in order.
    std::vector<int> mult(view.edges.size(), 0), first(view.edges.size(), -1);
    for (std::size_t i = 0; i < view.cells.size(); ++i) {
      int e = view.cells[i];
      if (first[e] < 0) first[e] = static_cast<int>(i);
      ++mult[e];
    }
    std::vector<int> order(view.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (value[a] != value[b]) return value[a] < value[b];
      if (mult[a] != mult[b]) return mult[a] > mult[b];
      return first[a] < first[b];
    });
    std::vector<int> rank(view.edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
    auto& p = arr.perm[axis];
    p.resize(view.dims[axis]);
    std::iota(p.begin(), p.end(), 0);
    std::stable_sort(p.begin(), p.end(),
                     [&](int a, int b) { return rank[view.cells[a]] < rank[view.cells[b]]; });
  }
  Evaluator(view, value).Sequence(arr.perm, arr.seq);
  return arr;
}

}  // namespace

MatrixView MakeView(const DecisionMatrix& m, const std::vector<int>& player_slot) {
  const std::size_t n = m.choices.size();
  MatrixView v;
  v.player_at_slot.assign(n, -1);
  for (std::size_t p = 0; p < n; ++p) v.player_at_slot[player_slot[p]] = static_cast<int>(p);
  v.dims.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    v.dims[s] = m.empty_domain ? 1 : static_cast<int>(m.choices[v.player_at_slot[s]].size());
  }
  std::vector<int> orig_dims(n);
  for (std::size_t p = 0; p < n; ++p) orig_dims[p] = v.dims[player_slot[p]];
  std::vector<int> slot_stride = Strides(v.dims);
  v.cells.assign(m.cells.size(), -1);
  std::vector<int> joint(n, 0);
  for (std::size_t idx = 0; idx < m.cells.size(); ++idx) {
    std::size_t target = 0;
    for (std::size_t p = 0; p < n; ++p) target += joint[p] * slot_stride[player_slot[p]];
    EdgeId e = m.cells[idx];
    auto it = std::find(v.edges.begin(), v.edges.end(), e);
    int local = static_cast<int>(it - v.edges.begin());
    if (it == v.edges.end()) v.edges.push_back(e);
    v.cells[target] = local;
    for (std::size_t p = n; p-- > 0;) {
      if (++joint[p] < orig_dims[p]) break;
      joint[p] = 0;
    }
  }
  return v;
}

Arrangement Canonicalize(const MatrixView& view, const std::vector<std::int64_t>& value) {
  const std::size_t n = view.dims.size();
  int nontrivial = 0;
  for (int d : view.dims) nontrivial += d > 1;
  if (nontrivial <= 1) return OneAxis(view, value);

  std::vector<int> mult(view.edges.size(), 0);
  for (int e : view.cells) ++mult[e];
  const std::vector<int> stride = Strides(view.dims);

  // Colour refinement of each axis's choices.
  std::vector<std::vector<int>> color(n);
  for (std::size_t s = 0; s < n; ++s) color[s].assign(view.dims[s], 0);
  auto count_classes = [&] {
    std::size_t total = 0;
    for (auto& c : color) total += std::set<int>(c.begin(), c.end()).size();
    return total;
  };
  std::size_t classes = count_classes();
  for (;;) {
    std::vector<std::vector<int>> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::vector<std::int64_t>> sigs(view.dims[s]);
      for (int i = 0; i < view.dims[s]; ++i) {
        std::vector<std::vector<std::int64_t>> items;
        for (std::size_t idx = 0; idx < view.cells.size(); ++idx) {
          if (static_cast<int>(idx / stride[s]) % view.dims[s] != i) continue;
          int e = view.cells[idx];
          std::vector<std::int64_t> item{value[e], mult[e]};
          for (std::size_t t = 0; t < n; ++t) {
            if (t != s) item.push_back(color[t][(idx / stride[t]) % view.dims[t]]);
          }
          items.push_back(std::move(item));
        }
        std::sort(items.begin(), items.end());
        auto& sig = sigs[i];
        sig.push_back(color[s][i]);
        for (auto& it : items) sig.insert(sig.end(), it.begin(), it.end());
      }
      std::vector<std::vector<std::int64_t>> uniq = sigs;
      std::sort(uniq.begin(), uniq.end());
      uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
      next[s].resize(view.dims[s]);
      for (int i = 0; i < view.dims[s]; ++i) {
        next[s][i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sigs[i]) - uniq.begin());
      }
    }
    color = std::move(next);
    std::size_t now = count_classes();
    if (now == classes) break;
    classes = now;
  }

  Arrangement best;
  best.perm.resize(n);
  struct Segment {
    std::size_t axis;
    int begin, end;
  };
  std::vector<Segment> segments;
  double arrangements = 1;
  for (std::size_t s = 0; s < n; ++s) {
    auto& p = best.perm[s];
    p.resize(view.dims[s]);
    std::iota(p.begin(), p.end(), 0);
    std::stable_sort(p.begin(), p.end(), [&](int a, int b) { return color[s][a] < color[s][b]; });
    for (int i = 0; i < view.dims[s];) {
      int j = i;
      while (j < view.dims[s] && color[s][p[j]] == color[s][p[i]]) ++j;
      if (j - i > 1) {
        segments.push_back({s, i, j});
        for (int k = 2; k <= j - i; ++k) arrangements *= k;
      }
      i = j;
    }
  }
  Evaluator eval(view, value);
  eval.Sequence(best.perm, best.seq);
  if (segments.empty()) return best;

  bool all_distinct = true;
  for (std::size_t e = 0; e < mult.size(); ++e) {
    all_distinct = all_distinct && mult[e] == 1 && value[e] == value[0];
  }
  // Every arrangement yields the same sequence.
  if (all_distinct) return best;

  if (arrangements * static_cast<double>(view.cells.size()) > 25.0 * kArrangementBudget) {
    throw BudgetExceededError("decision matrix with " + std::to_string(view.cells.size()) +
                              " cells is too symmetric to canonicalize");
  }
  std::vector<std::vector<int>> perm = best.perm;
  std::vector<std::pair<std::int64_t, int>> seq;
  for (;;) {
    std::size_t i = segments.size();
    while (i > 0) {
      Segment& g = segments[i - 1];
      auto& p = perm[g.axis];
      if (std::next_permutation(p.begin() + g.begin, p.begin() + g.end)) break;
      --i;
    }
    if (i == 0) break;
    eval.Sequence(perm, seq);
    if (seq < best.seq) {
      best.seq = seq;
      best.perm = perm;
    }
  }
  return best;
}

Canonicalizer::Canonicalizer(const GameTree& tree, const LabelAssignment& assignment,
                             CanonicalTable& table, bool sorted_levels)
    : tree_(tree), assignment_(assignment), table_(table), sorted_levels_(sorted_levels) {}

MatrixView Canonicalizer::View(NodeId n) const {
  return MakeView(BuildDecisionMatrix(tree_, n), assignment_.player_slot);
}

Arrangement Canonicalizer::Arrange(NodeId n) const { return Arrange(View(n)); }

Arrangement Canonicalizer::Arrange(const MatrixView& view) const {
  std::vector<std::int64_t> value(view.edges.size());
  for (std::size_t i = 0; i < view.edges.size(); ++i) value[i] = cls_[tree_.edge(view.edges[i]).to];
  return Canonicalize(view, value);
}

std::vector<std::int64_t> Canonicalizer::Signature(NodeId id, Arrangement* arrangement) const {
  const GameTree::Node& n = tree_.node(id);
  std::vector<std::int64_t> sig;
  auto state = [&] {
    if (assignment_.state_code.empty()) return;
    sig.push_back(n.state < 0 ? -1 : assignment_.state_code[n.state]);
  };
  switch (n.kind) {
    case NodeKind::kTerminal:
      sig = {kTagTerminal, assignment_.outcome_code[n.outcome]};
      state();
      break;
    case NodeKind::kTruncated:
      sig = {kTagTruncated};
      state();
      break;
    case NodeKind::kChance: {
      std::vector<std::array<std::int64_t, 3>> items;
      for (EdgeId e : n.children) {
        const auto& edge = tree_.edge(e);
        items.push_back({static_cast<std::int64_t>(edge.prob.numerator()),
                         static_cast<std::int64_t>(edge.prob.denominator()), cls_[edge.to]});
      }
      std::sort(items.begin(), items.end());
      sig = {kTagChance, static_cast<std::int64_t>(items.size())};
      for (auto& it : items) sig.insert(sig.end(), it.begin(), it.end());
      break;
    }
    case NodeKind::kState: {
      if (n.children.size() == 1 && tree_.edge(n.children[0]).label.empty()) {
        sig = {kTagEmpty};
        state();
        sig.push_back(cls_[tree_.edge(n.children[0]).to]);
        break;
      }
      MatrixView view = View(id);
      Arrangement arr = Arrange(view);
      sig = {kTagMatrix};
      state();
      sig.push_back(static_cast<std::int64_t>(view.dims.size()));
      for (int d : view.dims) sig.push_back(d);
      for (auto& [v, occ] : arr.seq) {
        sig.push_back(v);
        sig.push_back(occ);
      }
      if (arrangement) *arrangement = std::move(arr);
      break;
    }
  }
  return sig;
}

void Canonicalizer::Run() {
  cls_.assign(tree_.num_nodes(), -1);
  std::vector<NodeId> order = tree_.Preorder();
  std::vector<int> height(tree_.num_nodes(), 0);
  int max_h = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int h = 0;
    for (EdgeId e : tree_.node(*it).children) h = std::max(h, height[tree_.edge(e).to] + 1);
    height[*it] = h;
    max_h = std::max(max_h, h);
  }
  std::vector<std::vector<NodeId>> levels(order.empty() ? 0 : max_h + 1);
  for (NodeId v : order) levels[height[v]].push_back(v);
  for (auto& level : levels) {
    std::vector<std::vector<std::int64_t>> sigs;
    sigs.reserve(level.size());
    for (NodeId v : level) sigs.push_back(Signature(v));
    if (sorted_levels_) {
      std::vector<std::vector<std::int64_t>> fresh;
      for (auto& s : sigs) {
        if (!table_.Find(s)) fresh.push_back(s);
      }
      std::sort(fresh.begin(), fresh.end());
      fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
      for (auto& s : fresh) table_.Intern(s);
    }
    for (std::size_t i = 0; i < level.size(); ++i) cls_[level[i]] = table_.Intern(sigs[i]);
  }
}

std::vector<std::vector<std::int64_t>> PlayerInvariants(const Forest& forest, int num_players) {
  std::vector<std::vector<std::int64_t>> inv(num_players, std::vector<std::int64_t>(3, 0));
  for (const GameTree& t : forest) {
    for (NodeId v : t.Preorder()) {
      const auto& n = t.node(v);
      if (n.kind != NodeKind::kState || n.children.empty()) continue;
      DecisionMatrix m = BuildDecisionMatrix(t, v);
      if (m.empty_domain) continue;
      for (int p = 0; p < num_players; ++p) {
        std::int64_t k = static_cast<std::int64_t>(m.choices[p].size());
        inv[p][0] += k;
        inv[p][1] += k >= 2;
        inv[p][2] += k * k;
      }
    }
  }
  return inv;
}

std::vector<std::vector<std::int64_t>> OutcomeInvariants(const Forest& forest,
                                                         std::size_t num_outcomes) {
  std::vector<std::vector<std::int64_t>> inv(num_outcomes, std::vector<std::int64_t>(3, 0));
  for (const GameTree& t : forest) {
    std::vector<std::int64_t> depth(t.num_nodes(), 0);
    for (NodeId v : t.Preorder()) {
      const auto& n = t.node(v);
      if (n.parent >= 0) depth[v] = depth[n.parent] + 1;
      if (n.kind == NodeKind::kTerminal) {
        inv[n.outcome][0] += 1;
        inv[n.outcome][1] += depth[v];
        inv[n.outcome][2] += depth[v] * depth[v];
      }
    }
  }
  return inv;
}

namespace {

// Orders items by invariant and returns every ordering that only permutes
// items within equal-invariant classes (or just the first one).
std::vector<std::vector<int>> TieOrderings(const std::vector<int>& items,
                                           const std::vector<std::vector<std::int64_t>>& inv,
                                           bool all) {
  std::vector<int> base = items;
  std::stable_sort(base.begin(), base.end(), [&](int a, int b) { return inv[a] < inv[b]; });
  std::vector<std::pair<int, int>> segs;
  for (std::size_t i = 0; i < base.size();) {
    std::size_t j = i;
    while (j < base.size() && inv[base[j]] == inv[base[i]]) ++j;
    if (j - i > 1) segs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    i = j;
  }
  std::vector<std::vector<int>> out{base};
  if (!all || segs.empty()) return out;
  std::vector<int> cur = base;
  for (;;) {
    std::size_t i = segs.size();
    while (i > 0) {
      auto [b, e] = segs[i - 1];
      if (std::next_permutation(cur.begin() + b, cur.begin() + e)) break;
      --i;
    }
    if (i == 0) break;
    out.push_back(cur);
    if (out.size() > 100'000) throw BudgetExceededError("too many symmetric label assignments");
  }
  return out;
}

std::string Mapped(const std::optional<std::map<std::string, std::string>>& m,
                   const std::string& name, bool* ok) {
  if (!m) return name;
  auto it = m->find(name);
  if (it == m->end()) {
    *ok = false;
    return name;
  }
  return it->second;
}

}  // namespace

AssignmentSpace Assignments(const Forest& forest, const PinOptions& pins, CanonicalTable& table,
                            PinSide side, const Forest* other, bool all_candidates) {
  AssignmentSpace space;
  if (forest.empty()) {
    space.candidates.push_back({});
    return space;
  }
  const GameTree& t0 = forest.front();
  const int np = t0.num_players();
  const bool map_side = side == PinSide::kLeft;
  space.player_profile = PlayerInvariants(forest, np);
  auto outcome_inv = OutcomeInvariants(forest, t0.outcomes().size());
  std::vector<int> used;
  for (std::size_t o = 0; o < outcome_inv.size(); ++o) {
    if (outcome_inv[o][0] > 0) used.push_back(static_cast<int>(o));
  }
  for (int o : used) space.outcome_profile.push_back(outcome_inv[o]);
  std::sort(space.outcome_profile.begin(), space.outcome_profile.end());
  auto player_profile = space.player_profile;
  std::sort(player_profile.begin(), player_profile.end());
  space.player_profile = player_profile;

  // Player slots.
  std::vector<std::vector<int>> slotings;
  const bool pin_players = pins.players || pins.player_map.has_value();
  if (pin_players) {
    std::vector<std::string> names;
    for (const auto& p : t0.players()) {
      names.push_back(map_side ? Mapped(pins.player_map, p, &space.feasible) : p);
    }
    std::vector<std::string> ref = names;
    if (map_side && other && !other->empty()) ref = other->front().players();
    std::sort(ref.begin(), ref.end());
    std::vector<int> slot(np);
    std::set<std::string> distinct(names.begin(), names.end());
    if (distinct.size() != names.size()) space.feasible = false;
    for (int p = 0; p < np; ++p) {
      auto it = std::lower_bound(ref.begin(), ref.end(), names[p]);
      if (it == ref.end() || *it != names[p]) {
        space.feasible = false;
        slot[p] = p;
      } else {
        slot[p] = static_cast<int>(it - ref.begin());
      }
    }
    if (!space.feasible) std::iota(slot.begin(), slot.end(), 0);
    slotings.push_back(slot);
  } else {
    std::vector<int> all(np);
    std::iota(all.begin(), all.end(), 0);
    auto inv = PlayerInvariants(forest, np);
    for (auto& order : TieOrderings(all, inv, all_candidates)) {
      std::vector<int> slot(np);
      for (int k = 0; k < np; ++k) slot[order[k]] = k;
      slotings.push_back(slot);
    }
  }

  // Outcome codes.
  std::vector<std::vector<std::int64_t>> codings;
  const bool pin_outcomes = pins.outcomes || pins.outcome_map.has_value();
  if (pin_outcomes) {
    std::vector<std::int64_t> code(t0.outcomes().size(), -1);
    std::set<std::string> seen;
    for (int o : used) {
      std::string name =
          map_side ? Mapped(pins.outcome_map, t0.outcomes()[o], &space.feasible) : t0.outcomes()[o];
      if (!seen.insert(name).second) space.feasible = false;
      code[o] = table.NameCode("outcome:" + name);
    }
    codings.push_back(code);
  } else {
    for (auto& order : TieOrderings(used, outcome_inv, all_candidates)) {
      std::vector<std::int64_t> code(t0.outcomes().size(), -1);
      for (std::size_t k = 0; k < order.size(); ++k) code[order[k]] = static_cast<std::int64_t>(k);
      codings.push_back(code);
    }
  }

  std::vector<std::int64_t> states;
  if (pins.states) {
    for (const auto& s : t0.state_labels()) states.push_back(table.NameCode("state:" + s));
  }
  if (slotings.size() * codings.size() > 100'000) {
    throw BudgetExceededError("too many symmetric label assignments");
  }
  for (auto& s : slotings) {
    for (auto& c : codings) space.candidates.push_back({s, c, states});
  }
  return space;
}

}  // namespace internal

namespace {

void PreinternNames(const Forest& forest, const PinOptions& pins, CanonicalTable& table) {
  std::vector<std::string> names;
  for (const GameTree& t : forest) {
    for (NodeId v : t.Preorder()) {
      const auto& n = t.node(v);
      if (n.kind == NodeKind::kTerminal && (pins.outcomes || pins.outcome_map)) {
        bool ok = true;
        names.push_back("outcome:" + internal::Mapped(pins.outcome_map, t.outcomes()[n.outcome], &ok));
      }
      if (pins.states && n.state >= 0) names.push_back("state:" + t.state_labels()[n.state]);
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& n : names) table.NameCode(n);
}

std::string KeyFor(const Forest& forest, const PinOptions& pins, const LabelAssignment& a) {
  CanonicalTable table;
  PreinternNames(forest, pins, table);
  std::vector<int> roots;
  for (const GameTree& t : forest) {
    LabelAssignment local = a;
    if (pins.outcomes || pins.outcome_map) {
      for (std::size_t o = 0; o < local.outcome_code.size(); ++o) {
        if (local.outcome_code[o] < 0) continue;
        bool ok = true;
        local.outcome_code[o] = table.FindName("outcome:" +
                                               internal::Mapped(pins.outcome_map, t.outcomes()[o], &ok))
                                    .value_or(-1);
      }
    }
    if (pins.states) {
      local.state_code.clear();
      for (const auto& s : t.state_labels()) {
        local.state_code.push_back(table.FindName("state:" + s).value_or(-1));
      }
    }
    internal::Canonicalizer c(t, local, table, /*sorted_levels=*/true);
    c.Run();
    roots.push_back(t.root() < 0 ? -1 : c.Class(t.root()));
  }
  std::sort(roots.begin(), roots.end());
  std::ostringstream os;
  for (const auto& n : table.names()) os << n.size() << ':' << n;
  os << '|';
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::int64_t x : table.signature(static_cast<int>(i))) os << x << ',';
    os << ';';
  }
  os << '|';
  for (int r : roots) os << r << ',';
  return os.str();
}

}  // namespace

CanonicalKey CanonicalForm(const Forest& forest, const PinOptions& pins) {
  CanonicalKey key;
  key.players_pinned = pins.players || pins.player_map.has_value();
  key.outcomes_pinned = pins.outcomes || pins.outcome_map.has_value();
  key.states_pinned = pins.states;
  std::ostringstream head;
  head << (key.players_pinned ? 'P' : 'p') << (key.outcomes_pinned ? 'O' : 'o')
       << (key.states_pinned ? 'S' : 's') << '#';
  if (!forest.empty()) {
    const GameTree& t0 = forest.front();
    head << t0.num_players();
    if (key.players_pinned) {
      std::vector<std::string> names;
      for (const auto& p : t0.players()) {
        bool ok = true;
        names.push_back(internal::Mapped(pins.player_map, p, &ok));
      }
      std::sort(names.begin(), names.end());
      for (const auto& n : names) head << ',' << n.size() << ':' << n;
    }
  }
  head << '#';
  CanonicalTable scratch;
  auto space = internal::Assignments(forest, pins, scratch, internal::PinSide::kLeft, nullptr,
                                     /*all_candidates=*/true);
  std::optional<std::string> best;
  for (const auto& a : space.candidates) {
    std::string k = KeyFor(forest, pins, a);
    if (!best || k < *best) best = std::move(k);
  }
  key.bytes = head.str() + best.value_or("");
  return key;
}

CanonicalKey CanonicalForm(const GameTree& tree, const PinOptions& pins) {
  return CanonicalForm(Forest{tree}, pins);
}

}  // namespace ludeq
