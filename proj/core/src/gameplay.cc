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

#include "ludeq/gameplay.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ludeq/errors.h"

namespace ludeq {

Policy UniformPolicy() {
  return [](PlayerId, std::span<const DecisionId> legal, const GameState&,
            Rng& rng) { return legal[rng.UniformBelow(legal.size())]; };
}

Policy FirstLegalPolicy() {
  return [](PlayerId, std::span<const DecisionId> legal, const GameState&,
            Rng&) { return legal.front(); };
}

int SampleConsequence(const std::vector<Consequence>& consequences, Rng& rng) {
  if (consequences.size() == 1) return 0;
  std::uint64_t common = 1;
  for (const Consequence& c : consequences) {
    std::uint64_t d = c.probability.denominator();
    std::uint64_t g = std::gcd(common, d);
    unsigned __int128 l = static_cast<unsigned __int128>(common / g) * d;
    if (l > UINT64_MAX) throw std::overflow_error("consequence denominators too large");
    common = static_cast<std::uint64_t>(l);
  }
  std::uint64_t draw = rng.UniformBelow(common);
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < consequences.size(); ++i) {
    const Probability& p = consequences[i].probability;
    cumulative += p.numerator() * (common / p.denominator());
    if (draw < cumulative) return static_cast<int>(i);
  }
  return static_cast<int>(consequences.size()) - 1;
}

Playthrough Play(const GameSystem& sys, const GameState& s0,
                 const Policy& policy, std::uint64_t seed,
                 std::size_t max_steps) {
  if (!EvalStateSet(sys, sys.initial, s0)) {
    throw PreconditionError("state " + FormatState(sys, s0) +
                            " is not an initial condition");
  }
  Rng rng(seed);
  Playthrough play;
  GameState current = s0;
  while (true) {
    DecisionTuple tuple(sys.num_players(), kNullDecision);
    bool any = false;
    for (PlayerId p = 0; p < sys.num_players(); ++p) {
      std::vector<DecisionId> legal = LegalSet(sys, p, current);
      if (legal.empty()) continue;
      any = true;
      DecisionId chosen = policy(p, legal, current, rng);
      if (std::find(legal.begin(), legal.end(), chosen) == legal.end()) {
        throw PreconditionError("policy chose an illegal decision for player " +
                                sys.players[p] + " at " + FormatState(sys, current));
      }
      tuple[p] = chosen;
    }
    if (!any) break;
    if (play.steps.size() >= max_steps) {
      throw BudgetExceededError("playthrough exceeded " + std::to_string(max_steps) +
                                " steps");
    }
    const std::vector<Consequence>& results = Consequences(sys, tuple, current);
    int index = SampleConsequence(results, rng);
    GameState next = ApplyActions(sys, results[index].actions, current);
    play.steps.push_back(PlayStep{current, tuple, index, next});
    current = std::move(next);
  }
  play.outcome = Outcome(sys, current);
  play.final_state = std::move(current);
  return play;
}

}  // namespace ludeq
