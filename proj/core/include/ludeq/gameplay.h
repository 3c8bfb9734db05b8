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

#ifndef LUDEQ_GAMEPLAY_H_
#define LUDEQ_GAMEPLAY_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ludeq/game_system.h"
#include "ludeq/rng.h"

namespace ludeq {

// Chooses a decision for `player` from its nonempty legal set.
using Policy = std::function<DecisionId(
    PlayerId player, std::span<const DecisionId> legal, const GameState& state,
    Rng& rng)>;

// Uniformly random member of the legal set (one UniformBelow draw).
Policy UniformPolicy();
// The first legal decision in name order; consumes no randomness.
Policy FirstLegalPolicy();

struct PlayStep {
  GameState state;
  DecisionTuple tuple;
  // Index into the resolved consequence list.
  int consequence = 0;
  GameState successor;
};

struct Playthrough {
  std::vector<PlayStep> steps;
  GameState final_state;
  OutcomeId outcome = 0;
};

// The gameplay loop: every player with a nonempty legal set picks through
// the policy (in player order), then the consequence is sampled by drawing
// an integer below the common denominator of the consequence probabilities.
// A single consequence consumes no randomness. Throws PreconditionError if s0
// is not an initial condition or the policy picks an illegal decision,
// IncompleteSystemError if no consequence rule matches, and
// BudgetExceededError after max_steps steps.
Playthrough Play(const GameSystem& sys, const GameState& s0,
                 const Policy& policy, std::uint64_t seed,
                 std::size_t max_steps = 1'000'000);

// Index drawn from a consequence list with exact rational weights.
int SampleConsequence(const std::vector<Consequence>& consequences, Rng& rng);

}  // namespace ludeq

#endif  // LUDEQ_GAMEPLAY_H_
