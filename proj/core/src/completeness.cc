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

#include "ludeq/completeness.h"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <unordered_set>

#include "ludeq/errors.h"

namespace ludeq {

const char* ScopeName(Scope scope) {
  return scope == Scope::kAllStates ? "all" : "reachable";
}

Scope ParseScope(const std::string& text) {
  if (text == "all") return Scope::kAllStates;
  if (text == "reachable") return Scope::kReachable;
  throw std::invalid_argument("scope must be 'all' or 'reachable', got '" + text + "'");
}

const char* ViolationKindName(Violation::Kind kind) {
  switch (kind) {
    case Violation::Kind::kEmptyInitial:
      return "empty-initial";
    case Violation::Kind::kNoRuleMatches:
      return "no-rule-matches";
    case Violation::Kind::kProbabilitySum:
      return "probability-sum";
    case Violation::Kind::kNoOutcome:
      return "no-outcome";
    case Violation::Kind::kAmbiguousRule:
      return "ambiguous-rule";
  }
  return "unknown";
}

namespace {

class Checker {
 public:
  Checker(const GameSystem& sys, const CompletenessOptions& options,
          CompletenessReport& report)
      : sys_(sys), options_(options), report_(report) {}

  bool Full() const { return report_.violations.size() >= options_.max_violations; }

  void Add(Violation v) {
    if (Full()) {
      report_.truncated = true;
      return;
    }
    report_.violations.push_back(std::move(v));
  }

  // Checks one state; appends resolvable successors to `successors` if given.
  void Visit(const GameState& s, std::vector<GameState>* successors) {
    ++report_.states_checked;
    if (IsTerminal(sys_, s)) {
      ++report_.terminal_states;
      if (sys_.default_outcome < 0 ||
          sys_.default_outcome >= static_cast<int>(sys_.outcomes.size())) {
        Add({Violation::Kind::kNoOutcome, FormatState(sys_, s), "",
             "no outcome resolves at terminal state"});
      }
      return;
    }
    for (const DecisionTuple& t : LegalDecisionTuples(sys_, s)) {
      ++report_.tuples_checked;
      ConsequenceLookup lookup = FindConsequenceRule(sys_, t, s, options_.strict);
      if (!lookup.rule) {
        Add({Violation::Kind::kNoRuleMatches, FormatState(sys_, s), FormatTuple(sys_, t),
             "no consequence rule matches"});
        continue;
      }
      if (!lookup.also_matching.empty() &&
          report_.warnings.size() < options_.max_violations) {
        report_.warnings.push_back(
            {Violation::Kind::kAmbiguousRule, FormatState(sys_, s), FormatTuple(sys_, t),
             "consequence rule " + std::to_string(*lookup.rule + 1) + " shadows " +
                 std::to_string(lookup.also_matching.size()) + " other matching rule(s)"});
      }
      if (successors) {
        for (const Consequence& c : sys_.consequence_rules[*lookup.rule].results) {
          successors->push_back(ApplyActions(sys_, c.actions, s));
        }
      }
    }
  }

 private:
  const GameSystem& sys_;
  const CompletenessOptions& options_;
  CompletenessReport& report_;
};

}  // namespace

CompletenessReport CheckCompleteness(const GameSystem& sys, Scope scope,
                                     const CompletenessOptions& options) {
  CompletenessReport report;
  report.scope = scope;
  Checker checker(sys, options, report);

  for (std::size_t r = 0; r < sys.consequence_rules.size(); ++r) {
    Probability total;
    bool overflow = false;
    for (const Consequence& c : sys.consequence_rules[r].results) {
      try {
        total += c.probability;
      } catch (const std::overflow_error&) {
        overflow = true;
      }
    }
    if (overflow || !total.IsOne()) {
      checker.Add({Violation::Kind::kProbabilitySum, "", "",
                   "consequence rule " + std::to_string(r + 1) + " probabilities sum to " +
                       (overflow ? std::string("an overflowing value") : total.ToString())});
    }
  }

  std::vector<GameState> initial = InitialStates(sys);
  if (initial.empty()) {
    checker.Add({Violation::Kind::kEmptyInitial, "", "", "no initial condition"});
  }

  if (scope == Scope::kAllStates) {
    ForEachState(sys, [&](const GameState& s) {
      if (report.states_checked >= options.max_states) {
        throw BudgetExceededError("state space exceeds the completeness budget");
      }
      checker.Visit(s, nullptr);
      return !checker.Full();
    });
    return report;
  }

  std::unordered_set<GameState, GameStateHash> seen(initial.begin(), initial.end());
  std::deque<GameState> frontier(initial.begin(), initial.end());
  std::vector<GameState> successors;
  while (!frontier.empty() && !checker.Full()) {
    if (report.states_checked >= options.max_states) {
      throw BudgetExceededError("reachable set exceeds the completeness budget");
    }
    GameState s = std::move(frontier.front());
    frontier.pop_front();
    successors.clear();
    checker.Visit(s, &successors);
    for (GameState& next : successors) {
      if (seen.insert(next).second) frontier.push_back(std::move(next));
    }
  }
  return report;
}

std::vector<GameState> ReachableStates(const GameSystem& sys, std::size_t max_states) {
  std::vector<GameState> initial = InitialStates(sys);
  std::unordered_set<GameState, GameStateHash> seen(initial.begin(), initial.end());
  std::deque<GameState> frontier(initial.begin(), initial.end());
  while (!frontier.empty()) {
    if (seen.size() > max_states) {
      throw BudgetExceededError("reachable set exceeds " + std::to_string(max_states) +
                                " states");
    }
    GameState s = std::move(frontier.front());
    frontier.pop_front();
    if (IsTerminal(sys, s)) continue;
    for (const DecisionTuple& t : LegalDecisionTuples(sys, s)) {
      ConsequenceLookup lookup = FindConsequenceRule(sys, t, s);
      if (!lookup.rule) continue;
      for (const Consequence& c : sys.consequence_rules[*lookup.rule].results) {
        GameState next = ApplyActions(sys, c.actions, s);
        if (seen.insert(next).second) frontier.push_back(std::move(next));
      }
    }
  }
  std::vector<GameState> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace ludeq
