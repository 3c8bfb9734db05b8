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

#ifndef LUDEQ_GAME_SYSTEM_H_
#define LUDEQ_GAME_SYSTEM_H_

// Executable form of an underlying game system: players, substate tracks,
// initial conditions, decisions, actions, consequence/legality rules and
// outcomes, plus the primitive semantics built on them.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ludeq/probability.h"

namespace ludeq {

using PlayerId = int;
using TrackId = int;
using ValueId = std::uint16_t;
using DecisionId = int;
using ActionId = int;
using OutcomeId = int;
using SetId = int;

// The null decision. It is never a member of GameSystem::decisions.
inline constexpr DecisionId kNullDecision = -1;

struct TrackSpec {
  std::string name;
  std::vector<std::string> values;

  bool operator==(const TrackSpec&) const = default;
};

// One value per track, in track-list order.
struct GameState {
  std::vector<ValueId> values;

  bool operator==(const GameState&) const = default;
  auto operator<=>(const GameState&) const = default;
};

// A subset of the state space, as an expression over `track = value`
// literals, complement, intersection, union and references to named sets.
struct StateSetExpr {
  enum class Kind { kTrue, kFalse, kLiteral, kNot, kAnd, kOr, kRef };

  Kind kind = Kind::kTrue;
  TrackId track = -1;
  ValueId value = 0;
  SetId ref = -1;
  std::vector<StateSetExpr> children;

  static StateSetExpr True() { return {}; }
  static StateSetExpr False() { return {Kind::kFalse, -1, 0, -1, {}}; }
  static StateSetExpr Literal(TrackId track, ValueId value);
  static StateSetExpr Not(StateSetExpr child);
  static StateSetExpr And(std::vector<StateSetExpr> children);
  static StateSetExpr Or(std::vector<StateSetExpr> children);
  static StateSetExpr Ref(SetId set);

  bool operator==(const StateSetExpr&) const = default;
};

struct NamedSet {
  std::string name;
  StateSetExpr expr;

  bool operator==(const NamedSet&) const = default;
};

struct Assignment {
  TrackId track = -1;
  ValueId value = 0;

  bool operator==(const Assignment&) const = default;
};

// First clause whose guard contains the state applies; identity otherwise.
struct ActionClause {
  StateSetExpr guard;
  std::vector<Assignment> assignments;

  bool operator==(const ActionClause&) const = default;
};

struct ActionDef {
  std::string name;
  std::vector<ActionClause> clauses;

  bool operator==(const ActionDef&) const = default;
};

// One entry per player; kNullDecision marks the null decision.
using DecisionTuple = std::vector<DecisionId>;

struct PatternEntry {
  enum class Kind { kDecision, kNull, kWildcard };
  Kind kind = Kind::kWildcard;
  DecisionId decision = kNullDecision;

  bool Matches(DecisionId d) const;
  bool operator==(const PatternEntry&) const = default;
};

// A probability paired with a product of actions, applied left to right.
struct Consequence {
  Probability probability;
  std::vector<ActionId> actions;

  bool operator==(const Consequence&) const = default;
};

struct ConsequenceRule {
  std::vector<PatternEntry> pattern;
  StateSetExpr guard;
  std::vector<Consequence> results;

  bool operator==(const ConsequenceRule&) const = default;
};

struct LegalityRule {
  PlayerId player = 0;
  DecisionId decision = 0;
  StateSetExpr region;

  bool operator==(const LegalityRule&) const = default;
};

struct OutcomeRule {
  StateSetExpr region;
  OutcomeId outcome = 0;

  bool operator==(const OutcomeRule&) const = default;
};

struct GameSystem {
  std::string name;
  std::vector<std::string> players;
  std::vector<TrackSpec> tracks;
  StateSetExpr initial;
  std::vector<std::string> decisions;
  std::vector<ActionDef> actions;
  std::vector<ConsequenceRule> consequence_rules;
  std::vector<LegalityRule> legality_rules;
  std::vector<std::string> outcomes;
  std::vector<OutcomeRule> outcome_rules;
  OutcomeId default_outcome = 0;
  std::vector<NamedSet> named_sets;

  bool operator==(const GameSystem&) const = default;

  int num_players() const { return static_cast<int>(players.size()); }
  int num_tracks() const { return static_cast<int>(tracks.size()); }

  // Name lookups; nullopt when absent.
  std::optional<PlayerId> FindPlayer(std::string_view name) const;
  std::optional<TrackId> FindTrack(std::string_view name) const;
  std::optional<ValueId> FindValue(TrackId track, std::string_view name) const;
  std::optional<DecisionId> FindDecision(std::string_view name) const;
  std::optional<ActionId> FindAction(std::string_view name) const;
  std::optional<OutcomeId> FindOutcome(std::string_view name) const;
  std::optional<SetId> FindSet(std::string_view name) const;

  // Checks every structural invariant (references resolve, probability
  // lists sum to exactly 1, named sets acyclic, ...). Returns one message per
  // violation; empty means valid.
  std::vector<std::string> Validate() const;
  // Throws ValidationError carrying the first violations when invalid.
  void CheckValid() const;
};

// ---------------------------------------------------------------------------
// Semantics. All functions are pure; the system is never mutated.

bool EvalStateSet(const GameSystem& sys, const StateSetExpr& expr,
                  const GameState& state);

// Applies a single action: its first matching clause, else identity.
GameState ApplyAction(const GameSystem& sys, ActionId action, GameState state);
// Applies the product left to right in written order.
GameState ApplyActions(const GameSystem& sys, std::span<const ActionId> actions,
                       GameState state);

// L_p(s), sorted by decision name.
std::vector<DecisionId> LegalSet(const GameSystem& sys, PlayerId player,
                                 const GameState& state);

bool IsTerminal(const GameSystem& sys, const GameState& state);

// D_0^n(s): the product of the legal sets with null substituted for players
// whose legal set is empty. Sorted lexicographically by decision names.
// Throws PreconditionError on a terminal state.
std::vector<DecisionTuple> LegalDecisionTuples(const GameSystem& sys,
                                               const GameState& state);

struct ConsequenceLookup {
  // Index of the first matching rule, or nullopt if none matched.
  std::optional<int> rule;
  // Further rules that also match; only filled in strict mode.
  std::vector<int> also_matching;
};

ConsequenceLookup FindConsequenceRule(const GameSystem& sys,
                                      const DecisionTuple& tuple,
                                      const GameState& state,
                                      bool strict = false);

// Results of the first matching consequence rule. Throws
// IncompleteSystemError when no rule matches. The tuple is assumed legal.
const std::vector<Consequence>& Consequences(const GameSystem& sys,
                                             const DecisionTuple& tuple,
                                             const GameState& state);

// Throws PreconditionError on a non-terminal state.
OutcomeId Outcome(const GameSystem& sys, const GameState& state);

// ---------------------------------------------------------------------------
// State space.

// Product of the track sizes; nullopt if it does not fit in 64 bits.
std::optional<std::uint64_t> StateSpaceSize(const GameSystem& sys);

// Mixed-radix decoding (first track most significant), so that index order
// coincides with lexicographic state order.
GameState StateAt(const GameSystem& sys, std::uint64_t index);
std::uint64_t StateIndex(const GameSystem& sys, const GameState& state);

// Visits every state exactly once in lexicographic order. The callback
// returns false to stop early.
void ForEachState(const GameSystem& sys,
                  const std::function<bool(const GameState&)>& visit);
// Same, restricted to the states inside `filter`.
void ForEachStateIn(const GameSystem& sys, const StateSetExpr& filter,
                    const std::function<bool(const GameState&)>& visit);

// S_0 in lexicographic order.
std::vector<GameState> InitialStates(const GameSystem& sys);

// ---------------------------------------------------------------------------
// Text forms used by the CLI, JSON exports and diagnostics.

// "turn=start,c1=-,..." in track order.
std::string FormatState(const GameSystem& sys, const GameState& state);
// Inverse of FormatState; every track must be assigned exactly once (any
// order). Throws std::invalid_argument on malformed or unknown names.
GameState ParseState(const GameSystem& sys, std::string_view text);
// "(flip, flip)"; the null decision prints as 0.
std::string FormatTuple(const GameSystem& sys, const DecisionTuple& tuple);
std::string FormatActions(const GameSystem& sys,
                          std::span<const ActionId> actions);

struct GameStateHash {
  std::size_t operator()(const GameState& s) const noexcept;
};

}  // namespace ludeq

#endif  // LUDEQ_GAME_SYSTEM_H_
