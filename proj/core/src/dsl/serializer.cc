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

#include <cctype>
#include <sstream>

#include "dsl/lexer.h"
#include "ludeq/dsl.h"

namespace ludeq {
namespace {

std::string Expr(const GameSystem& sys, const StateSetExpr& e);

std::string Operand(const GameSystem& sys, const StateSetExpr& e) {
  if (e.kind == StateSetExpr::Kind::kAnd || e.kind == StateSetExpr::Kind::kOr) {
    return "(" + Expr(sys, e) + ")";
  }
  return Expr(sys, e);
}

std::string Expr(const GameSystem& sys, const StateSetExpr& e) {
  switch (e.kind) {
    case StateSetExpr::Kind::kTrue:
      return "true";
    case StateSetExpr::Kind::kFalse:
      return "false";
    case StateSetExpr::Kind::kLiteral:
      return QuoteName(sys.tracks[e.track].name) + " = " +
             QuoteName(sys.tracks[e.track].values[e.value]);
    case StateSetExpr::Kind::kRef:
      return QuoteName(sys.named_sets[e.ref].name);
    case StateSetExpr::Kind::kNot:
      return "not " + Operand(sys, e.children[0]);
    case StateSetExpr::Kind::kAnd:
    case StateSetExpr::Kind::kOr: {
      if (e.children.empty()) return e.kind == StateSetExpr::Kind::kAnd ? "true" : "false";
      std::string out;
      const char* op = e.kind == StateSetExpr::Kind::kAnd ? " and " : " or ";
      for (std::size_t i = 0; i < e.children.size(); ++i) {
        if (i) out += op;
        out += Operand(sys, e.children[i]);
      }
      return out;
    }
  }
  return "false";
}

template <typename T, typename F>
std::string Join(const std::vector<T>& items, F&& render) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += render(items[i]);
  }
  return out;
}

}  // namespace

std::string QuoteName(std::string_view name) {
  bool bare = !name.empty() && !dsl::IsKeyword(name);
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') bare = false;
  }
  if (bare) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '$') {
      out += "$$";
    } else {
      out += c;
    }
  }
  return out + "\"";
}

std::string Serialize(const GameSystem& sys) {
  auto q = [](const std::string& s) { return QuoteName(s); };
  std::ostringstream os;
  os << "game " << QuoteName(sys.name) << "\n";
  os << "players " << Join(sys.players, q) << "\n";
  for (const TrackSpec& t : sys.tracks) {
    os << "track " << QuoteName(t.name) << " { " << Join(t.values, q) << " }\n";
  }
  os << "decisions " << Join(sys.decisions, q) << "\n";
  if (!sys.outcomes.empty()) os << "outcomes " << Join(sys.outcomes, q) << "\n";
  os << "\n";
  for (const NamedSet& s : sys.named_sets) {
    os << "set " << QuoteName(s.name) << " = " << Expr(sys, s.expr) << "\n";
  }
  for (const ActionDef& a : sys.actions) {
    os << "action " << QuoteName(a.name) << " {";
    for (std::size_t i = 0; i < a.clauses.size(); ++i) {
      const ActionClause& c = a.clauses[i];
      os << (i ? ";\n  " : "\n  ");
      if (c.guard.kind != StateSetExpr::Kind::kTrue) os << "when " << Expr(sys, c.guard) << " ";
      os << "set " << Join(c.assignments, [&](const Assignment& x) {
        return QuoteName(sys.tracks[x.track].name) + " = " +
               QuoteName(sys.tracks[x.track].values[x.value]);
      });
    }
    os << "\n}\n";
  }
  os << "init " << Expr(sys, sys.initial) << "\n\n";
  for (const LegalityRule& l : sys.legality_rules) {
    os << "legal " << QuoteName(sys.players[l.player]) << " "
       << QuoteName(sys.decisions[l.decision]);
    if (l.region.kind != StateSetExpr::Kind::kTrue) os << " when " << Expr(sys, l.region);
    os << "\n";
  }
  for (const ConsequenceRule& r : sys.consequence_rules) {
    os << "consequence (" << Join(r.pattern, [&](const PatternEntry& p) -> std::string {
      switch (p.kind) {
        case PatternEntry::Kind::kWildcard:
          return "*";
        case PatternEntry::Kind::kNull:
          return "0";
        case PatternEntry::Kind::kDecision:
          break;
      }
      return QuoteName(sys.decisions[p.decision]);
    }) << ")";
    if (r.guard.kind != StateSetExpr::Kind::kTrue) os << " when " << Expr(sys, r.guard);
    os << " ->";
    for (std::size_t i = 0; i < r.results.size(); ++i) {
      const Consequence& c = r.results[i];
      os << (i ? ";\n    prob " : " prob ") << c.probability.ToString() << ":";
      if (!c.actions.empty()) {
        os << " " << Join(c.actions, [&](ActionId a) { return QuoteName(sys.actions[a].name); });
      }
    }
    os << "\n";
  }
  for (const OutcomeRule& o : sys.outcome_rules) {
    os << "outcome " << QuoteName(sys.outcomes[o.outcome]) << " when " << Expr(sys, o.region)
       << "\n";
  }
  if (!sys.outcomes.empty()) {
    os << "outcome default " << QuoteName(sys.outcomes[sys.default_outcome]) << "\n";
  }
  return os.str();
}

}  // namespace ludeq
