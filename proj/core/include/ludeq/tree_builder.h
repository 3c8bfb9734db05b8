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

#ifndef LUDEQ_TREE_BUILDER_H_
#define LUDEQ_TREE_BUILDER_H_

#include <cstddef>
#include <optional>

#include "ludeq/game_system.h"
#include "ludeq/game_tree.h"

namespace ludeq {

inline constexpr std::size_t kDefaultNodeBudget = 10'000'000;

struct BuildOptions {
  // State nodes of generation <= depth are expanded; generation depth + 1
  // becomes the frontier (truncated unless terminal). The root is
  // generation 0. nullopt builds the full tree.
  std::optional<int> depth;
  std::size_t node_budget = kDefaultNodeBudget;
};

// Builds the game tree rooted at `root`. Throws IncompleteSystemError when a
// legal tuple has no consequence, BudgetExceededError past the budget.
GameTree BuildTree(const GameSystem& sys, const GameState& root,
                   const BuildOptions& options = {});

// One tree per initial state, in lexicographic state order. Throws
// ValidationError when the initial set is empty.
Forest BuildForest(const GameSystem& sys, const BuildOptions& options = {});

}  // namespace ludeq

#endif  // LUDEQ_TREE_BUILDER_H_
