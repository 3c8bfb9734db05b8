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

#include "ludeq/game_system.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ludeq/errors.h"

namespace ludeq {
namespace {

template <typename T, typename Name>
std::optional<int> FindByName(const std::vector<T>& items, std::string_view name,
                              Name get_name) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (get_name(items[i]) == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

void CheckExpr(const GameSystem& sys, const StateSetExpr& expr,
               const std::string& where, std::vector<std::string>& errors) {
  using Kind = StateSetExpr::Kind;
  switch (expr.kind) {
    case Kind::kTrue:
    case Kind::kFalse:
      if (!expr.children.empty()) errors.push_back(where + ": constant with children");
      return;
    case Kind::kLiteral:
      if (expr.track < 0 || expr.track >= sys.num_tracks()) {
        errors.push_back(where + ": literal names an unknown track");
      } else if (expr.value >= sys.tracks[expr.track].values.size()) {
        errors.push_back(where + ": literal names an unknown value of track '" +
                         sys.tracks[expr.track].name + "'");
      }
      return;
    case Kind::kNot:
      if (expr.children.size() != 1) {
        errors.push_back(where + ": negation needs exactly one operand");
        return;
      }
      break;
    case Kind::kAnd:
    case Kind::kOr:
      break;
    case Kind::kRef:
      if (expr.ref < 0 || expr.ref >= static_cast<SetId>(sys.named_sets.size())) {
        errors.push_back(where + ": reference to an unknown named set");
      }
      return;
  }
  for (const StateSetExpr& child : expr.children) {
    CheckExpr(sys, child, where, errors);
  }
}

void CollectRefs(const StateSetExpr& expr, std::vector<SetId>& out) {
  if (expr.kind == StateSetExpr::Kind::kRef) out.push_back(expr.ref);
  for (const StateSetExpr& child : expr.children) CollectRefs(child, out);
}

template <typename Names>
void CheckUnique(const Names& names, const std::string& what,
                 std::vector<std::string>& errors) {
  std::set<std::string> seen;
  for (const std::string& n : names) {
    if (!seen.insert(n).second) errors.push_back("duplicate " + what + " '" + n + "'");
  }
}

}  // namespace

bool PatternEntry::Matches(DecisionId d) const {
  switch (kind) {
    case Kind::kWildcard:
      return true;
    case Kind::kNull:
      return d == kNullDecision;
    case Kind::kDecision:
      return d == decision;
  }
  return false;
}

std::optional<PlayerId> GameSystem::FindPlayer(std::string_view n) const {
  return FindByName(players, n, [](const std::string& s) -> const std::string& { return s; });
}
std::optional<TrackId> GameSystem::FindTrack(std::string_view n) const {
  return FindByName(tracks, n, [](const TrackSpec& t) -> const std::string& { return t.name; });
}
std::optional<ValueId> GameSystem::FindValue(TrackId track, std::string_view n) const {
  if (track < 0 || track >= num_tracks()) return std::nullopt;
  auto found = FindByName(tracks[track].values, n,
                          [](const std::string& s) -> const std::string& { return s; });
  if (!found) return std::nullopt;
  return static_cast<ValueId>(*found);
}
std::optional<DecisionId> GameSystem::FindDecision(std::string_view n) const {
  return FindByName(decisions, n, [](const std::string& s) -> const std::string& { return s; });
}
std::optional<ActionId> GameSystem::FindAction(std::string_view n) const {
  return FindByName(actions, n, [](const ActionDef& a) -> const std::string& { return a.name; });
}
std::optional<OutcomeId> GameSystem::FindOutcome(std::string_view n) const {
  return FindByName(outcomes, n, [](const std::string& s) -> const std::string& { return s; });
}
std::optional<SetId> GameSystem::FindSet(std::string_view n) const {
  return FindByName(named_sets, n, [](const NamedSet& s) -> const std::string& { return s.name; });
}

std::vector<std::string> GameSystem::Validate() const {
  std::vector<std::string> errors;
  if (players.empty()) errors.push_back("no players declared");
  CheckUnique(players, "player", errors);

  if (tracks.empty()) errors.push_back("no tracks declared");
  std::vector<std::string> track_names;
  for (const TrackSpec& t : tracks) {
    track_names.push_back(t.name);
    if (t.values.empty()) errors.push_back("track '" + t.name + "' has no values");
    if (t.values.size() > std::numeric_limits<ValueId>::max()) {
      errors.push_back("track '" + t.name + "' has too many values");
    }
    CheckUnique(t.values, "value of track '" + t.name + "'", errors);
  }
  CheckUnique(track_names, "track", errors);

  CheckUnique(decisions, "decision", errors);
  for (const std::string& d : decisions) {
    if (d == "0") errors.push_back("the null decision 0 cannot be declared");
  }

  std::vector<std::string> set_names;
  for (const NamedSet& s : named_sets) {
    set_names.push_back(s.name);
    CheckExpr(*this, s.expr, "set '" + s.name + "'", errors);
  }
  CheckUnique(set_names, "named set", errors);

  // Named-set references must be acyclic (iterative DFS with colors).
  {
    const int n = static_cast<int>(named_sets.size());
    std::vector<std::vector<SetId>> refs(n);
    for (int i = 0; i < n; ++i) CollectRefs(named_sets[i].expr, refs[i]);
    std::vector<int> color(n, 0);
    for (int start = 0; start < n; ++start) {
      if (color[start] != 0) continue;
      std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
      color[start] = 1;
      while (!stack.empty()) {
        auto& [node, next] = stack.back();
        if (next < refs[node].size()) {
          SetId child = refs[node][next++];
          if (child < 0 || child >= n) continue;
          if (color[child] == 1) {
            errors.push_back("named set '" + named_sets[child].name +
                             "' is defined in terms of itself");
          } else if (color[child] == 0) {
            color[child] = 1;
            stack.push_back({child, 0});
          }
        } else {
          color[node] = 2;
          stack.pop_back();
        }
      }
    }
  }

  CheckExpr(*this, initial, "init", errors);

  std::vector<std::string> action_names;
  for (const ActionDef& a : actions) {
    action_names.push_back(a.name);
    for (const ActionClause& c : a.clauses) {
      CheckExpr(*this, c.guard, "action '" + a.name + "'", errors);
      for (const Assignment& as : c.assignments) {
        if (as.track < 0 || as.track >= num_tracks() ||
            as.value >= tracks[as.track].values.size()) {
          errors.push_back("action '" + a.name + "' assigns an unknown track or value");
        }
      }
    }
  }
  CheckUnique(action_names, "action", errors);

  for (std::size_t r = 0; r < consequence_rules.size(); ++r) {
    const ConsequenceRule& rule = consequence_rules[r];
    const std::string where = "consequence rule " + std::to_string(r + 1);
    if (rule.pattern.size() != players.size()) {
      errors.push_back(where + ": pattern has " + std::to_string(rule.pattern.size()) +
                       " entries for " + std::to_string(players.size()) + " players");
    }
    for (const PatternEntry& e : rule.pattern) {
      if (e.kind == PatternEntry::Kind::kDecision &&
          (e.decision < 0 || e.decision >= static_cast<int>(decisions.size()))) {
        errors.push_back(where + ": pattern names an unknown decision");
      }
    }
    CheckExpr(*this, rule.guard, where, errors);
    if (rule.results.empty()) errors.push_back(where + ": no consequences");
    Probability total;
    bool sum_ok = true;
    for (const Consequence& c : rule.results) {
      if (!c.probability.IsValidMass()) {
        errors.push_back(where + ": probability " + c.probability.ToString() +
                         " outside (0,1]");
      }
      for (ActionId a : c.actions) {
        if (a < 0 || a >= static_cast<int>(actions.size())) {
          errors.push_back(where + ": unknown action");
        }
      }
      try {
        total += c.probability;
      } catch (const std::overflow_error&) {
        sum_ok = false;
      }
    }
    if (!rule.results.empty() && (!sum_ok || !total.IsOne())) {
      errors.push_back(where + ": probabilities sum to " +
                       (sum_ok ? total.ToString() : std::string("an overflowing value")) +
                       ", not 1");
    }
  }

  for (const LegalityRule& rule : legality_rules) {
    if (rule.player < 0 || rule.player >= num_players()) {
      errors.push_back("legality rule names an unknown player");
      continue;
    }
    if (rule.decision < 0 || rule.decision >= static_cast<int>(decisions.size())) {
      errors.push_back("legality rule names an unknown decision");
      continue;
    }
    CheckExpr(*this, rule.region,
              "legality rule for " + players[rule.player] + "/" + decisions[rule.decision],
              errors);
  }

  if (outcomes.empty()) errors.push_back("no outcomes declared");
  CheckUnique(outcomes, "outcome", errors);
  for (const OutcomeRule& rule : outcome_rules) {
    if (rule.outcome < 0 || rule.outcome >= static_cast<int>(outcomes.size())) {
      errors.push_back("outcome rule names an unknown outcome");
    }
    CheckExpr(*this, rule.region, "outcome rule", errors);
  }
  if (default_outcome < 0 || default_outcome >= static_cast<int>(outcomes.size())) {
    errors.push_back("default outcome is not declared");
  }
  return errors;
}

void GameSystem::CheckValid() const {
  std::vector<std::string> errors = Validate();
  if (errors.empty()) return;
  std::string message = "invalid game system: " + errors.front();
  if (errors.size() > 1) {
    message += " (and " + std::to_string(errors.size() - 1) + " more)";
  }
  throw ValidationError(message);
}

GameState ApplyAction(const GameSystem& sys, ActionId action, GameState state) {
  for (const ActionClause& clause : sys.actions[action].clauses) {
    if (EvalStateSet(sys, clause.guard, state)) {
      for (const Assignment& a : clause.assignments) state.values[a.track] = a.value;
      return state;
    }
  }
  return state;
}

GameState ApplyActions(const GameSystem& sys, std::span<const ActionId> actions,
                       GameState state) {
  for (ActionId a : actions) state = ApplyAction(sys, a, std::move(state));
  return state;
}

std::vector<DecisionId> LegalSet(const GameSystem& sys, PlayerId player,
                                 const GameState& state) {
  std::vector<DecisionId> legal;
  for (const LegalityRule& rule : sys.legality_rules) {
    if (rule.player != player) continue;
    if (std::find(legal.begin(), legal.end(), rule.decision) != legal.end()) continue;
    if (EvalStateSet(sys, rule.region, state)) legal.push_back(rule.decision);
  }
  std::sort(legal.begin(), legal.end(), [&](DecisionId a, DecisionId b) {
    return sys.decisions[a] < sys.decisions[b];
  });
  return legal;
}

bool IsTerminal(const GameSystem& sys, const GameState& state) {
  for (const LegalityRule& rule : sys.legality_rules) {
    if (EvalStateSet(sys, rule.region, state)) return false;
  }
  return true;
}

std::vector<DecisionTuple> LegalDecisionTuples(const GameSystem& sys,
                                               const GameState& state) {
  const int n = sys.num_players();
  std::vector<std::vector<DecisionId>> choices(n);
  bool any = false;
  for (PlayerId p = 0; p < n; ++p) {
    choices[p] = LegalSet(sys, p, state);
    if (choices[p].empty()) {
      choices[p].push_back(kNullDecision);
    } else {
      any = true;
    }
  }
  if (!any) {
    throw PreconditionError("legal decision tuples requested at terminal state " +
                            FormatState(sys, state));
  }
  std::vector<DecisionTuple> tuples;
  std::vector<std::size_t> digit(n, 0);
  while (true) {
    DecisionTuple t(n);
    for (PlayerId p = 0; p < n; ++p) t[p] = choices[p][digit[p]];
    tuples.push_back(std::move(t));
    int p = n - 1;
    while (p >= 0 && ++digit[p] == choices[p].size()) digit[p--] = 0;
    if (p < 0) break;
  }
  return tuples;
}

ConsequenceLookup FindConsequenceRule(const GameSystem& sys,
                                      const DecisionTuple& tuple,
                                      const GameState& state, bool strict) {
  ConsequenceLookup lookup;
  for (std::size_t r = 0; r < sys.consequence_rules.size(); ++r) {
    const ConsequenceRule& rule = sys.consequence_rules[r];
    if (rule.pattern.size() != tuple.size()) continue;
    bool match = true;
    for (std::size_t p = 0; p < tuple.size() && match; ++p) {
      match = rule.pattern[p].Matches(tuple[p]);
    }
    if (!match || !EvalStateSet(sys, rule.guard, state)) continue;
    if (!lookup.rule) {
      lookup.rule = static_cast<int>(r);
      if (!strict) break;
    } else {
      lookup.also_matching.push_back(static_cast<int>(r));
    }
  }
  return lookup;
}

const std::vector<Consequence>& Consequences(const GameSystem& sys,
                                             const DecisionTuple& tuple,
                                             const GameState& state) {
  ConsequenceLookup lookup = FindConsequenceRule(sys, tuple, state);
  if (!lookup.rule) {
    std::string s = FormatState(sys, state);
    std::string t = FormatTuple(sys, tuple);
    throw IncompleteSystemError("no consequence rule matches tuple " + t +
                                    " at state " + s,
                                s, t);
  }
  return sys.consequence_rules[*lookup.rule].results;
}

OutcomeId Outcome(const GameSystem& sys, const GameState& state) {
  if (!IsTerminal(sys, state)) {
    throw PreconditionError("outcome requested at non-terminal state " +
                            FormatState(sys, state));
  }
  for (const OutcomeRule& rule : sys.outcome_rules) {
    if (EvalStateSet(sys, rule.region, state)) return rule.outcome;
  }
  return sys.default_outcome;
}

std::optional<std::uint64_t> StateSpaceSize(const GameSystem& sys) {
  unsigned __int128 size = 1;
  for (const TrackSpec& t : sys.tracks) {
    size *= t.values.size();
    if (size > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(size);
}

GameState StateAt(const GameSystem& sys, std::uint64_t index) {
  GameState s;
  s.values.resize(sys.tracks.size());
  for (int t = sys.num_tracks() - 1; t >= 0; --t) {
    std::uint64_t radix = sys.tracks[t].values.size();
    s.values[t] = static_cast<ValueId>(index % radix);
    index /= radix;
  }
  return s;
}

std::uint64_t StateIndex(const GameSystem& sys, const GameState& state) {
  std::uint64_t index = 0;
  for (int t = 0; t < sys.num_tracks(); ++t) {
    index = index * sys.tracks[t].values.size() + state.values[t];
  }
  return index;
}

void ForEachState(const GameSystem& sys,
                  const std::function<bool(const GameState&)>& visit) {
  GameState s;
  s.values.assign(sys.tracks.size(), 0);
  for (const TrackSpec& t : sys.tracks) {
    if (t.values.empty()) return;
  }
  while (true) {
    if (!visit(s)) return;
    int t = sys.num_tracks() - 1;
    while (t >= 0 && ++s.values[t] == sys.tracks[t].values.size()) s.values[t--] = 0;
    if (t < 0) return;
  }
}

void ForEachStateIn(const GameSystem& sys, const StateSetExpr& filter,
                    const std::function<bool(const GameState&)>& visit) {
  ForEachState(sys, [&](const GameState& s) {
    if (!EvalStateSet(sys, filter, s)) return true;
    return visit(s);
  });
}

std::vector<GameState> InitialStates(const GameSystem& sys) {
  std::vector<GameState> states;
  ForEachStateIn(sys, sys.initial, [&](const GameState& s) {
    states.push_back(s);
    return true;
  });
  return states;
}

std::string FormatState(const GameSystem& sys, const GameState& state) {
  std::string out;
  for (int t = 0; t < sys.num_tracks(); ++t) {
    if (t > 0) out += ',';
    out += sys.tracks[t].name;
    out += '=';
    out += sys.tracks[t].values[state.values[t]];
  }
  return out;
}

GameState ParseState(const GameSystem& sys, std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  GameState state;
  state.values.assign(sys.tracks.size(), 0);
  std::vector<bool> seen(sys.tracks.size(), false);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = trim(text.substr(pos, comma - pos));
    pos = comma + 1;
    if (item.empty()) {
      if (comma == text.size()) break;
      throw std::invalid_argument("empty assignment in state literal");
    }
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("expected track=value in state literal, got '" +
                                  std::string(item) + "'");
    }
    std::string_view track_name = trim(item.substr(0, eq));
    std::string_view value_name = trim(item.substr(eq + 1));
    auto track = sys.FindTrack(track_name);
    if (!track) throw std::invalid_argument("unknown track '" + std::string(track_name) + "'");
    auto value = sys.FindValue(*track, value_name);
    if (!value) {
      throw std::invalid_argument("unknown value '" + std::string(value_name) +
                                  "' for track '" + std::string(track_name) + "'");
    }
    if (seen[*track]) {
      throw std::invalid_argument("track '" + std::string(track_name) + "' assigned twice");
    }
    seen[*track] = true;
    state.values[*track] = *value;
  }
  for (int t = 0; t < sys.num_tracks(); ++t) {
    if (!seen[t]) {
      throw std::invalid_argument("state literal leaves track '" + sys.tracks[t].name +
                                  "' unset");
    }
  }
  return state;
}

std::string FormatTuple(const GameSystem& sys, const DecisionTuple& tuple) {
  std::string out = "(";
  for (std::size_t p = 0; p < tuple.size(); ++p) {
    if (p > 0) out += ", ";
    out += tuple[p] == kNullDecision ? std::string("0") : sys.decisions[tuple[p]];
  }
  return out + ")";
}

std::string FormatActions(const GameSystem& sys, std::span<const ActionId> actions) {
  if (actions.empty()) return "identity";
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0) out += " . ";
    out += sys.actions[actions[i]].name;
  }
  return out;
}

std::size_t GameStateHash::operator()(const GameState& s) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (ValueId v : s.values) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace ludeq
