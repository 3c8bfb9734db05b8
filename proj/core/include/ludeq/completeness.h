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

#ifndef LUDEQ_COMPLETENESS_H_
#define LUDEQ_COMPLETENESS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ludeq/game_system.h"

namespace ludeq {

enum class Scope { kAllStates, kReachable };

const char* ScopeName(Scope scope);
// "all" or "reachable"; throws std::invalid_argument otherwise.
Scope ParseScope(const std::string& text);

struct Violation {
  enum class Kind {
    kEmptyInitial,
    kNoRuleMatches,
    kProbabilitySum,
    kNoOutcome,
    kAmbiguousRule,
  };
  Kind kind;
  std::string state;  // empty for rule-level violations
  std::string tuple;
  std::string message;
};

const char* ViolationKindName(Violation::Kind kind);

struct CompletenessReport {
  Scope scope = Scope::kReachable;
  std::uint64_t states_checked = 0;
  std::uint64_t terminal_states = 0;
  std::uint64_t tuples_checked = 0;
  std::vector<Violation> violations;
  // Ambiguity is a warning, not a completeness failure.
  std::vector<Violation> warnings;
  bool truncated = false;  // stopped after max_violations

  bool complete() const { return violations.empty(); }
};

struct CompletenessOptions {
  bool strict = false;  // report overlapping consequence rules as warnings
  std::size_t max_violations = 1000;
  std::size_t max_states = 50'000'000;
};

// Checks that the gameplay loop can always be executed: S_0 is nonempty,
// every consequence probability list sums to 1, and every legal tuple at
// every in-scope non-terminal state resolves to a consequence rule.
CompletenessReport CheckCompleteness(const GameSystem& sys, Scope scope,
                                     const CompletenessOptions& options = {});

// Forward closure of S_0 under legal tuples and their consequences, sorted
// lexicographically. Tuples with no matching rule are skipped. Throws
// BudgetExceededError beyond max_states.
std::vector<GameState> ReachableStates(const GameSystem& sys,
                                       std::size_t max_states = 50'000'000);

}  // namespace ludeq

#endif  // LUDEQ_COMPLETENESS_H_
