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

#ifndef LUDEQ_CANONICAL_INTERNAL_H_
#define LUDEQ_CANONICAL_INTERNAL_H_

#include <cstdint>
#include <vector>

#include "ludeq/canonical.h"
#include "ludeq/game_tree.h"

namespace ludeq::internal {

// A decision matrix with axes reordered into slot order. Cells hold local
// edge indices, row-major with slot 0 most significant.
struct MatrixView {
  std::vector<int> dims;
  std::vector<int> cells;
  std::vector<EdgeId> edges;        // local index -> edge id
  std::vector<int> player_at_slot;  // slot -> player id
};

MatrixView MakeView(const DecisionMatrix& m, const std::vector<int>& player_slot);

// A canonical arrangement: perm[s][k] is the original choice index placed
// at position k on slot s; seq holds (value, first-occurrence) per cell.
struct Arrangement {
  std::vector<std::vector<int>> perm;
  std::vector<std::pair<std::int64_t, int>> seq;
};

// Lexicographically least arrangement over per-axis permutations. Throws
// BudgetExceededError on matrices too symmetric to search.
Arrangement Canonicalize(const MatrixView& view, const std::vector<std::int64_t>& edge_value);

inline constexpr std::size_t kArrangementBudget = 2'000'000;

// Computes subtree classes bottom-up by height. With sorted_levels, new
// signatures of each height are interned in sorted order so that ids depend
// only on the tree (used for table-independent keys).
class Canonicalizer {
 public:
  Canonicalizer(const GameTree& tree, const LabelAssignment& assignment, CanonicalTable& table,
                bool sorted_levels = false);

  void Run();
  int Class(NodeId n) const { return cls_[n]; }
  const std::vector<int>& classes() const { return cls_; }

  // Signature of a node given its children's classes.
  std::vector<std::int64_t> Signature(NodeId n, Arrangement* arrangement = nullptr) const;
  Arrangement Arrange(NodeId n) const;
  Arrangement Arrange(const MatrixView& view) const;
  MatrixView View(NodeId n) const;

 private:
  const GameTree& tree_;
  const LabelAssignment& assignment_;
  CanonicalTable& table_;
  bool sorted_levels_;
  std::vector<int> cls_;
};

// Invariant-driven candidate assignments for one tree under the pin regime.
// `reference` (optional) names the other tree for pinned maps; slots and
// codes of pinned labels are then expressed in the reference's terms.
struct AssignmentSpace {
  std::vector<LabelAssignment> candidates;
  // Sorted invariant profiles; equivalent trees have equal profiles.
  std::vector<std::vector<std::int64_t>> player_profile;
  std::vector<std::vector<std::int64_t>> outcome_profile;
  bool feasible = true;  // false when pinned names cannot match
};

enum class PinSide { kLeft, kRight };

AssignmentSpace Assignments(const Forest& forest, const PinOptions& pins, CanonicalTable& table,
                            PinSide side, const Forest* other, bool all_candidates);

// Per-player invariants: (sum of |choices|, nodes with >= 2 choices,
// sum of squares), computed over all state nodes of the forest.
std::vector<std::vector<std::int64_t>> PlayerInvariants(const Forest& forest, int num_players);
// Per outcome id: (leaf count, sum of leaf depths, sum of squared depths).
std::vector<std::vector<std::int64_t>> OutcomeInvariants(const Forest& forest,
                                                         std::size_t num_outcomes);

}  // namespace ludeq::internal

#endif  // LUDEQ_CANONICAL_INTERNAL_H_
