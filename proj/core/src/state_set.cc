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

#include <utility>

#include "ludeq/errors.h"
#include "ludeq/game_system.h"

namespace ludeq {

StateSetExpr StateSetExpr::Literal(TrackId track, ValueId value) {
  StateSetExpr e;
  e.kind = Kind::kLiteral;
  e.track = track;
  e.value = value;
  return e;
}

StateSetExpr StateSetExpr::Not(StateSetExpr child) {
  StateSetExpr e;
  e.kind = Kind::kNot;
  e.children.push_back(std::move(child));
  return e;
}

StateSetExpr StateSetExpr::And(std::vector<StateSetExpr> children) {
  StateSetExpr e;
  e.kind = Kind::kAnd;
  e.children = std::move(children);
  return e;
}

StateSetExpr StateSetExpr::Or(std::vector<StateSetExpr> children) {
  StateSetExpr e;
  e.kind = Kind::kOr;
  e.children = std::move(children);
  return e;
}

StateSetExpr StateSetExpr::Ref(SetId set) {
  StateSetExpr e;
  e.kind = Kind::kRef;
  e.ref = set;
  return e;
}

bool EvalStateSet(const GameSystem& sys, const StateSetExpr& expr,
                  const GameState& state) {
  using Kind = StateSetExpr::Kind;
  switch (expr.kind) {
    case Kind::kTrue:
      return true;
    case Kind::kFalse:
      return false;
    case Kind::kLiteral:
      return state.values[expr.track] == expr.value;
    case Kind::kNot:
      return !EvalStateSet(sys, expr.children.front(), state);
    case Kind::kAnd:
      for (const StateSetExpr& child : expr.children) {
        if (!EvalStateSet(sys, child, state)) return false;
      }
      return true;
    case Kind::kOr:
      for (const StateSetExpr& child : expr.children) {
        if (EvalStateSet(sys, child, state)) return true;
      }
      return false;
    case Kind::kRef:
      if (expr.ref < 0 ||
          expr.ref >= static_cast<SetId>(sys.named_sets.size())) {
        throw ValidationError("unresolved named-set reference");
      }
      return EvalStateSet(sys, sys.named_sets[expr.ref].expr, state);
  }
  return false;
}

}  // namespace ludeq
