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

#ifndef LUDEQ_REDUCE_H_
#define LUDEQ_REDUCE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ludeq/equivalence.h"
#include "ludeq/game_tree.h"

namespace ludeq {

enum class ReductionKind { kMatrixRedundancy, kBookkeeping, kSinglePlayer, kSymmetry };
const char* ReductionName(ReductionKind kind);

enum class BookkeepingCase { kNone, kReplaceByLeaf, kNewChance, kMergeIntoChance, kRootChance };
// "1", "2a", "2b", "2c".
const char* BookkeepingCaseName(BookkeepingCase c);

// A place where one reduction applies.
//   matrix redundancy: `root` is the node; `player` drops `removed` in favor
//     of `kept`, or player == -1 turns an all-singleton matrix into the
//     empty-domain label.
//   bookkeeping / single-player: `root` is the subtree root, `interior` the
//     deleted inner nodes and `leaves` the kept frontier.
//   symmetry: `root` is the parent; `kept` and `removed_child` are siblings.
struct ReductionSite {
  ReductionKind kind = ReductionKind::kMatrixRedundancy;
  NodeId root = -1;
  int player = -1;
  Choice kept_choice;
  Choice removed_choice;
  BookkeepingCase bookkeeping = BookkeepingCase::kNone;
  std::vector<NodeId> interior;
  std::vector<NodeId> leaves;
  std::vector<Probability> leaf_probs;  // bookkeeping case 2 only
  NodeId kept_child = -1;
  NodeId removed_child = -1;

  bool operator==(const ReductionSite&) const = default;
};

// Every site of the given kind in the tree. Sites touching truncated nodes
// are not reported.
std::vector<ReductionSite> FindSites(const GameTree& tree, ReductionKind kind);

// Applies one site and returns the compacted result. Throws StaleSiteError
// if the site does not describe the given tree.
GameTree ApplyReduction(const GameTree& tree, const ReductionSite& site);

struct ReductionStep {
  ReductionSite site;
  std::string state;  // label of the site root, when it has one
  std::size_t nodes_before = 0, nodes_after = 0;
  std::size_t choices_before = 0, choices_after = 0;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  std::size_t rounds = 0;
  std::string ToJson(int indent = -1) const;
};

struct NormalizeOptions {
  // Randomizes phase order, visiting order and kept representatives.
  std::optional<std::uint64_t> shuffle_seed;
  bool record_trace = true;
};

// (node count, total decision-set size); every reduction strictly lowers it
// lexicographically.
struct TreeMeasure {
  std::size_t nodes = 0;
  std::size_t choices = 0;
  auto operator<=>(const TreeMeasure&) const = default;
};
TreeMeasure Measure(const GameTree& tree);

// Applies reductions until none is left: matrix redundancy, bookkeeping,
// single-player, symmetry, repeated. The result is compacted.
GameTree Normalize(const GameTree& tree, const NormalizeOptions& options = {},
                   ReductionTrace* trace = nullptr);
Forest Normalize(const Forest& forest, const NormalizeOptions& options = {},
                 std::vector<ReductionTrace>* traces = nullptr);

struct AgencyResult {
  std::optional<Witness> witness;  // relates normal_a to normal_b
  Forest normal_a, normal_b;
  bool equivalent() const { return witness.has_value(); }
};

// Relabeling equivalence of the normal forms.
AgencyResult AgencyEquivalence(const Forest& a, const Forest& b, const PinOptions& pins = {},
                               const NormalizeOptions& options = {});
AgencyResult AgencyEquivalence(const GameTree& a, const GameTree& b, const PinOptions& pins = {},
                               const NormalizeOptions& options = {});

}  // namespace ludeq

#endif  // LUDEQ_REDUCE_H_
