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

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <utility>

#include "dsl/lexer.h"
#include "dsl/macro.h"
#include "ludeq/dsl.h"

namespace ludeq {

std::string Diagnostic::Format() const {
  std::ostringstream os;
  os << path << ':' << span.line << ':' << span.column << ": "
     << (severity == Severity::kError ? "error" : "warning") << ": " << message;
  return os.str();
}

namespace {

std::string JoinDiagnostics(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const Diagnostic& d : diagnostics) {
    if (!out.empty()) out += '\n';
    out += d.Format();
  }
  return out.empty() ? "parse error" : out;
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : Error(JoinDiagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace dsl {
namespace {

struct Name {
  std::string text;
  SourceSpan span;
};

struct RawExpr {
  enum class Kind { kTrue, kFalse, kLiteral, kNotLiteral, kRef, kNot, kAnd, kOr };
  Kind kind = Kind::kTrue;
  Name a;  // track or set name
  Name b;  // value
  SourceSpan span;
  std::vector<RawExpr> children;
};

struct RawClause {
  std::optional<RawExpr> guard;
  std::vector<std::pair<Name, Name>> assignments;
};

struct RawAction {
  Name name;
  std::vector<RawClause> clauses;
};

struct RawResult {
  Name num;
  std::optional<Name> den;
  SourceSpan span;
  std::vector<Name> actions;
};

struct RawPattern {
  enum class Kind { kDecision, kNull, kWildcard } kind;
  Name name;
};

struct RawConsequence {
  SourceSpan span;
  std::vector<RawPattern> pattern;
  std::optional<RawExpr> guard;
  std::vector<RawResult> results;
};

struct RawLegal {
  Name player;
  Name decision;
  std::optional<RawExpr> region;
};

struct RawOutcome {
  Name outcome;
  RawExpr region;
};

struct RawTrack {
  Name name;
  std::vector<Name> values;
};

struct RawSet {
  Name name;
  RawExpr expr;
};

struct RawSystem {
  std::optional<Name> game;
  std::optional<std::vector<Name>> players;
  SourceSpan players_span;
  std::vector<RawTrack> tracks;
  std::vector<Name> decisions;
  std::vector<Name> outcome_names;  // from `outcomes` and rules, in order
  std::vector<RawSet> sets;
  std::vector<RawAction> actions;
  std::vector<RawLegal> legals;
  std::vector<RawConsequence> consequences;
  std::vector<RawOutcome> outcome_rules;
  std::optional<Name> default_outcome;
  std::optional<RawExpr> init;
  SourceSpan init_span;
};

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, const std::string& path,
         std::vector<Diagnostic>& diagnostics, std::vector<SourceFile::Declaration>& decls)
      : t_(tokens), path_(path), diagnostics_(diagnostics), decls_(decls) {}

  RawSystem Run() {
    while (!Peek().kind_is_end()) {
      std::size_t start = pos_;
      if (!Statement()) {
        Recover(start);
      }
      while (Peek().tok.IsPunct(";")) ++pos_;
    }
    return std::move(raw_);
  }

 private:
  struct View {
    const Token& tok;
    bool kind_is_end() const { return tok.kind == Token::Kind::kEnd; }
  };

  View Peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, t_.size() - 1);
    return {t_[i]};
  }
  const Token& Cur() const { return t_[std::min(pos_, t_.size() - 1)]; }

  void Error(SourceSpan span, std::string message) {
    diagnostics_.push_back({path_, span, Diagnostic::Severity::kError, std::move(message)});
  }

  static std::string Describe(const Token& t) {
    switch (t.kind) {
      case Token::Kind::kEnd:
        return "end of input";
      case Token::Kind::kString:
        return "\"" + t.text + "\"";
      default:
        return "'" + t.text + "'";
    }
  }

  bool Expect(std::string_view punct) {
    if (Cur().IsPunct(punct)) {
      ++pos_;
      return true;
    }
    Error(Cur().span, "expected '" + std::string(punct) + "', found " + Describe(Cur()));
    return false;
  }

  bool ExpectKeyword(std::string_view kw) {
    if (Cur().IsKeyword(kw)) {
      ++pos_;
      return true;
    }
    Error(Cur().span, "expected '" + std::string(kw) + "', found " + Describe(Cur()));
    return false;
  }

  // A bare non-keyword identifier or a quoted string.
  bool IsNameToken(const Token& t) const {
    return t.kind == Token::Kind::kString ||
           (t.kind == Token::Kind::kIdent && !IsKeyword(t.text));
  }

  std::optional<Name> ParseName(std::string_view what) {
    const Token& t = Cur();
    if (!IsNameToken(t)) {
      Error(t.span, "expected " + std::string(what) + ", found " + Describe(t));
      return std::nullopt;
    }
    ++pos_;
    return Name{t.text, t.span};
  }

  std::optional<std::vector<Name>> ParseNameList(std::string_view what) {
    std::vector<Name> names;
    auto first = ParseName(what);
    if (!first) return std::nullopt;
    names.push_back(*first);
    while (Cur().IsPunct(",")) {
      ++pos_;
      auto next = ParseName(what);
      if (!next) return std::nullopt;
      names.push_back(*next);
    }
    return names;
  }

  void Recover(std::size_t start) {
    if (pos_ == start) ++pos_;
    int depth = 0;
    while (Cur().kind != Token::Kind::kEnd) {
      const Token& t = Cur();
      if (t.IsPunct("{")) ++depth;
      if (t.IsPunct("}")) --depth;
      if (depth <= 0 && t.kind == Token::Kind::kIdent && IsStatementStart(t.text)) return;
      ++pos_;
    }
  }

  static bool IsStatementStart(std::string_view w) {
    return w == "game" || w == "players" || w == "track" || w == "decisions" ||
           w == "outcomes" || w == "set" || w == "action" || w == "legal" ||
           w == "consequence" || w == "outcome" || w == "init";
  }

  void Declare(const Token& kw, std::string name) {
    decls_.push_back({kw.text, std::move(name), kw.span});
  }

  bool Statement() {
    const Token& kw = Cur();
    if (kw.kind != Token::Kind::kIdent || !IsStatementStart(kw.text)) {
      Error(kw.span, "expected a declaration, found " + Describe(kw));
      return false;
    }
    ++pos_;
    const std::string& k = kw.text;
    if (k == "game") {
      auto n = ParseName("game name");
      if (!n) return false;
      if (raw_.game) Error(kw.span, "duplicate 'game' declaration");
      raw_.game = *n;
      Declare(kw, n->text);
      return true;
    }
    if (k == "players") {
      auto names = ParseNameList("player name");
      if (!names) return false;
      if (raw_.players) Error(kw.span, "duplicate 'players' declaration");
      raw_.players = *names;
      raw_.players_span = kw.span;
      Declare(kw, "");
      return true;
    }
    if (k == "track") {
      auto n = ParseName("track name");
      if (!n || !Expect("{")) return false;
      RawTrack track{*n, {}};
      while (!Cur().IsPunct("}")) {
        auto v = ParseName("track value");
        if (!v) return false;
        track.values.push_back(*v);
        if (Cur().IsPunct(",")) {
          ++pos_;
        } else if (!Cur().IsPunct("}")) {
          Error(Cur().span, "expected ',' or '}', found " + Describe(Cur()));
          return false;
        }
      }
      ++pos_;
      raw_.tracks.push_back(std::move(track));
      Declare(kw, n->text);
      return true;
    }
    if (k == "decisions") {
      auto names = ParseNameList("decision name");
      if (!names) return false;
      raw_.decisions.insert(raw_.decisions.end(), names->begin(), names->end());
      Declare(kw, "");
      return true;
    }
    if (k == "outcomes") {
      auto names = ParseNameList("outcome name");
      if (!names) return false;
      raw_.outcome_names.insert(raw_.outcome_names.end(), names->begin(), names->end());
      Declare(kw, "");
      return true;
    }
    if (k == "set") {
      auto n = ParseName("set name");
      if (!n || !Expect("=")) return false;
      auto e = Expr();
      if (!e) return false;
      raw_.sets.push_back({*n, std::move(*e)});
      Declare(kw, n->text);
      return true;
    }
    if (k == "action") return Action(kw);
    if (k == "legal") {
      auto player = ParseName("player name");
      if (!player) return false;
      auto decision = ParseName("decision name");
      if (!decision) return false;
      RawLegal legal{*player, *decision, std::nullopt};
      if (Cur().IsKeyword("when")) {
        ++pos_;
        auto e = Expr();
        if (!e) return false;
        legal.region = std::move(*e);
      }
      raw_.legals.push_back(std::move(legal));
      Declare(kw, "");
      return true;
    }
    if (k == "consequence") return ConsequenceStatement(kw);
    if (k == "outcome") {
      if (Cur().IsKeyword("default")) {
        ++pos_;
        auto n = ParseName("outcome name");
        if (!n) return false;
        if (raw_.default_outcome) Error(kw.span, "duplicate default outcome");
        raw_.default_outcome = *n;
        raw_.outcome_names.push_back(*n);
        Declare(kw, n->text);
        return true;
      }
      auto n = ParseName("outcome name");
      if (!n || !ExpectKeyword("when")) return false;
      auto e = Expr();
      if (!e) return false;
      raw_.outcome_names.push_back(*n);
      raw_.outcome_rules.push_back({*n, std::move(*e)});
      Declare(kw, n->text);
      return true;
    }
    // init
    auto e = Expr();
    if (!e) return false;
    if (raw_.init) Error(kw.span, "duplicate 'init' declaration");
    raw_.init = std::move(*e);
    raw_.init_span = kw.span;
    Declare(kw, "");
    return true;
  }

  bool Action(const Token& kw) {
    auto n = ParseName("action name");
    if (!n || !Expect("{")) return false;
    RawAction action{*n, {}};
    while (!Cur().IsPunct("}")) {
      RawClause clause;
      if (Cur().IsKeyword("when")) {
        ++pos_;
        auto g = Expr();
        if (!g) return false;
        clause.guard = std::move(*g);
      }
      if (!ExpectKeyword("set")) return false;
      while (true) {
        auto track = ParseName("track name");
        if (!track || !Expect("=")) return false;
        auto value = ParseName("track value");
        if (!value) return false;
        clause.assignments.emplace_back(*track, *value);
        if (!Cur().IsPunct(",")) break;
        ++pos_;
      }
      action.clauses.push_back(std::move(clause));
      if (Cur().IsPunct(";")) {
        ++pos_;
      } else if (!Cur().IsPunct("}")) {
        Error(Cur().span, "expected ';' or '}', found " + Describe(Cur()));
        return false;
      }
    }
    ++pos_;
    raw_.actions.push_back(std::move(action));
    Declare(kw, n->text);
    return true;
  }

  bool ConsequenceStatement(const Token& kw) {
    RawConsequence rule;
    rule.span = kw.span;
    if (!Expect("(")) return false;
    while (true) {
      const Token& t = Cur();
      if (t.IsPunct("*")) {
        rule.pattern.push_back({RawPattern::Kind::kWildcard, {"*", t.span}});
        ++pos_;
      } else if (t.kind == Token::Kind::kIdent && t.text == "0") {
        rule.pattern.push_back({RawPattern::Kind::kNull, {"0", t.span}});
        ++pos_;
      } else {
        auto n = ParseName("decision, '0' or '*'");
        if (!n) return false;
        rule.pattern.push_back({RawPattern::Kind::kDecision, *n});
      }
      if (Cur().IsPunct(",")) {
        ++pos_;
        continue;
      }
      if (!Expect(")")) return false;
      break;
    }
    if (Cur().IsKeyword("when")) {
      ++pos_;
      auto g = Expr();
      if (!g) return false;
      rule.guard = std::move(*g);
    }
    if (!Expect("->")) return false;
    if (!Cur().IsKeyword("prob")) {
      // Shorthand for a single certain consequence.
      RawResult r{{"1", Cur().span}, std::nullopt, Cur().span, {}};
      if (!ActionList(r.actions)) return false;
      rule.results.push_back(std::move(r));
    } else {
      while (Cur().IsKeyword("prob")) {
        RawResult r;
        r.span = Cur().span;
        ++pos_;
        auto num = ParseName("probability");
        if (!num) return false;
        r.num = *num;
        if (Cur().IsPunct("/")) {
          ++pos_;
          auto den = ParseName("probability denominator");
          if (!den) return false;
          r.den = *den;
        }
        if (!Expect(":")) return false;
        if (!ActionList(r.actions)) return false;
        rule.results.push_back(std::move(r));
        if (Cur().IsPunct(";") && Peek(1).tok.IsKeyword("prob")) ++pos_;
      }
    }
    raw_.consequences.push_back(std::move(rule));
    Declare(kw, "");
    return true;
  }

  bool ActionList(std::vector<Name>& out) {
    if (!IsNameToken(Cur())) return true;  // identity
    auto names = ParseNameList("action name");
    if (!names) return false;
    out = std::move(*names);
    return true;
  }

  std::optional<RawExpr> Expr() { return OrExpr(); }

  std::optional<RawExpr> OrExpr() {
    SourceSpan span = Cur().span;
    auto first = AndExpr();
    if (!first) return std::nullopt;
    if (!Cur().IsKeyword("or")) return first;
    RawExpr e{RawExpr::Kind::kOr, {}, {}, span, {}};
    e.children.push_back(std::move(*first));
    while (Cur().IsKeyword("or")) {
      ++pos_;
      auto next = AndExpr();
      if (!next) return std::nullopt;
      e.children.push_back(std::move(*next));
    }
    return e;
  }

  std::optional<RawExpr> AndExpr() {
    SourceSpan span = Cur().span;
    auto first = Unary();
    if (!first) return std::nullopt;
    if (!Cur().IsKeyword("and")) return first;
    RawExpr e{RawExpr::Kind::kAnd, {}, {}, span, {}};
    e.children.push_back(std::move(*first));
    while (Cur().IsKeyword("and")) {
      ++pos_;
      auto next = Unary();
      if (!next) return std::nullopt;
      e.children.push_back(std::move(*next));
    }
    return e;
  }

  std::optional<RawExpr> Unary() {
    const Token& t = Cur();
    if (t.IsKeyword("not")) {
      ++pos_;
      auto child = Unary();
      if (!child) return std::nullopt;
      RawExpr e{RawExpr::Kind::kNot, {}, {}, t.span, {}};
      e.children.push_back(std::move(*child));
      return e;
    }
    if (t.IsPunct("(")) {
      ++pos_;
      auto inner = OrExpr();
      if (!inner || !Expect(")")) return std::nullopt;
      return inner;
    }
    if (t.IsKeyword("true") || t.IsKeyword("false")) {
      ++pos_;
      return RawExpr{t.text == "true" ? RawExpr::Kind::kTrue : RawExpr::Kind::kFalse,
                     {}, {}, t.span, {}};
    }
    auto a = ParseName("expression");
    if (!a) return std::nullopt;
    if (Cur().IsPunct("=") || Cur().IsPunct("!=")) {
      bool negated = Cur().IsPunct("!=");
      ++pos_;
      auto b = ParseName("track value");
      if (!b) return std::nullopt;
      return RawExpr{negated ? RawExpr::Kind::kNotLiteral : RawExpr::Kind::kLiteral, *a, *b,
                     a->span, {}};
    }
    return RawExpr{RawExpr::Kind::kRef, *a, {}, a->span, {}};
  }

  const std::vector<Token>& t_;
  const std::string& path_;
  std::vector<Diagnostic>& diagnostics_;
  std::vector<SourceFile::Declaration>& decls_;
  std::size_t pos_ = 0;
  RawSystem raw_;
};

// Name resolution and semantic checks.
class Resolver {
 public:
  Resolver(RawSystem& raw, const std::string& path, std::vector<Diagnostic>& errors,
           std::vector<Diagnostic>& warnings)
      : raw_(raw), path_(path), errors_(errors), warnings_(warnings) {}

  GameSystem Run() {
    GameSystem sys;
    if (raw_.game) {
      sys.name = raw_.game->text;
    } else {
      Error({1, 1}, "missing 'game' declaration");
    }
    if (raw_.players) {
      for (const Name& p : *raw_.players) {
        if (!Unique(players_, p, "player")) continue;
        sys.players.push_back(p.text);
      }
    } else {
      Error({1, 1}, "missing 'players' declaration");
    }
    if (raw_.tracks.empty()) Error({1, 1}, "no tracks declared");
    for (const RawTrack& t : raw_.tracks) {
      if (!Unique(tracks_, t.name, "track")) continue;
      TrackSpec spec{t.name.text, {}};
      std::map<std::string, int> seen;
      if (t.values.empty()) Error(t.name.span, "track '" + t.name.text + "' has no values");
      if (t.values.size() > 65535) Error(t.name.span, "track has too many values");
      for (const Name& v : t.values) {
        if (!Unique(seen, v, "value of track '" + t.name.text + "'")) continue;
        spec.values.push_back(v.text);
      }
      track_values_.push_back(std::move(seen));
      sys.tracks.push_back(std::move(spec));
    }
    if (raw_.decisions.empty()) Error({1, 1}, "no decisions declared");
    for (const Name& d : raw_.decisions) {
      if (d.text == "0" || d.text.empty()) {
        Error(d.span, "'" + d.text + "' cannot name a decision");
        continue;
      }
      if (!Unique(decisions_, d, "decision")) continue;
      sys.decisions.push_back(d.text);
    }
    for (const Name& o : raw_.outcome_names) {
      if (outcomes_.count(o.text)) continue;
      outcomes_[o.text] = static_cast<int>(sys.outcomes.size());
      sys.outcomes.push_back(o.text);
    }
    for (const RawSet& s : raw_.sets) {
      if (!Unique(sets_, s.name, "set")) continue;
      set_spans_.push_back(s.name.span);
    }
    for (const RawAction& a : raw_.actions) Unique(actions_, a.name, "action");

    for (const RawSet& s : raw_.sets) {
      sys.named_sets.push_back({s.name.text, Resolve(s.expr)});
    }
    CheckSetCycles(sys);

    for (const RawAction& a : raw_.actions) {
      ActionDef def{a.name.text, {}};
      for (const RawClause& c : a.clauses) {
        ActionClause clause;
        if (c.guard) clause.guard = Resolve(*c.guard);
        std::map<int, bool> assigned;
        for (const auto& [track, value] : c.assignments) {
          auto tid = LookupTrack(track);
          if (!tid) continue;
          auto vid = LookupValue(*tid, value);
          if (!vid) continue;
          if (assigned[*tid]) Error(track.span, "track '" + track.text + "' assigned twice");
          assigned[*tid] = true;
          clause.assignments.push_back({*tid, *vid});
        }
        def.clauses.push_back(std::move(clause));
      }
      sys.actions.push_back(std::move(def));
    }

    std::vector<bool> player_legal(sys.players.size(), false);
    for (const RawLegal& l : raw_.legals) {
      LegalityRule rule;
      auto pit = players_.find(l.player.text);
      auto dit = decisions_.find(l.decision.text);
      if (pit == players_.end()) {
        Error(l.player.span, "unknown player '" + l.player.text + "'");
        continue;
      }
      if (dit == decisions_.end()) {
        Error(l.decision.span, "unknown decision '" + l.decision.text + "'");
        continue;
      }
      rule.player = pit->second;
      rule.decision = dit->second;
      if (l.region) rule.region = Resolve(*l.region);
      player_legal[rule.player] = true;
      sys.legality_rules.push_back(std::move(rule));
    }
    for (std::size_t p = 0; p < player_legal.size(); ++p) {
      if (!player_legal[p]) {
        Warning(raw_.players_span, "player '" + sys.players[p] + "' has no legality rules");
      }
    }

    if (raw_.consequences.empty()) Error({1, 1}, "no consequence rules declared");
    std::vector<bool> action_used(sys.actions.size(), false);
    for (const RawConsequence& c : raw_.consequences) {
      ConsequenceRule rule;
      if (c.pattern.size() != sys.players.size()) {
        Error(c.span, "pattern has " + std::to_string(c.pattern.size()) +
                          " entries but the game has " + std::to_string(sys.players.size()) +
                          " players");
      }
      for (const RawPattern& p : c.pattern) {
        PatternEntry e;
        if (p.kind == RawPattern::Kind::kWildcard) {
          e.kind = PatternEntry::Kind::kWildcard;
        } else if (p.kind == RawPattern::Kind::kNull) {
          e.kind = PatternEntry::Kind::kNull;
        } else {
          e.kind = PatternEntry::Kind::kDecision;
          auto it = decisions_.find(p.name.text);
          if (it == decisions_.end()) {
            Error(p.name.span, "unknown decision '" + p.name.text + "'");
          } else {
            e.decision = it->second;
          }
        }
        rule.pattern.push_back(e);
      }
      if (c.guard) rule.guard = Resolve(*c.guard);
      Probability total = Probability::Zero();
      bool probabilities_ok = true;
      for (const RawResult& r : c.results) {
        Consequence q;
        auto prob = ParseProbability(r);
        if (!prob) {
          probabilities_ok = false;
        } else {
          q.probability = *prob;
          try {
            total += *prob;
          } catch (const std::exception&) {
            probabilities_ok = false;
            Error(r.span, "probability arithmetic overflow");
          }
        }
        for (const Name& a : r.actions) {
          auto it = actions_.find(a.text);
          if (it == actions_.end()) {
            Error(a.span, "unknown action '" + a.text + "'");
            continue;
          }
          action_used[it->second] = true;
          q.actions.push_back(it->second);
        }
        rule.results.push_back(std::move(q));
      }
      if (probabilities_ok && !total.IsOne()) {
        Error(c.span, "consequence probabilities sum to " + total.ToString() + ", not 1");
      }
      sys.consequence_rules.push_back(std::move(rule));
    }
    for (std::size_t a = 0; a < action_used.size(); ++a) {
      if (!action_used[a]) {
        Warning(raw_.actions[a].name.span, "action '" + sys.actions[a].name + "' is never used");
      }
    }

    for (const RawOutcome& o : raw_.outcome_rules) {
      sys.outcome_rules.push_back({Resolve(o.region), outcomes_.at(o.outcome.text)});
    }
    if (raw_.default_outcome) {
      sys.default_outcome = outcomes_.at(raw_.default_outcome->text);
    } else {
      Error({1, 1}, "missing 'outcome default' declaration");
    }
    if (raw_.init) {
      sys.initial = Resolve(*raw_.init);
    } else {
      Error({1, 1}, "missing 'init' declaration");
    }
    return sys;
  }

 private:
  void Error(SourceSpan span, std::string message) {
    errors_.push_back({path_, span, Diagnostic::Severity::kError, std::move(message)});
  }
  void Warning(SourceSpan span, std::string message) {
    warnings_.push_back({path_, span, Diagnostic::Severity::kWarning, std::move(message)});
  }

  bool Unique(std::map<std::string, int>& table, const Name& n, const std::string& what) {
    if (table.count(n.text)) {
      Error(n.span, "duplicate " + what + " '" + n.text + "'");
      return false;
    }
    int id = static_cast<int>(table.size());
    table[n.text] = id;
    return true;
  }

  std::optional<int> LookupTrack(const Name& n) {
    auto it = tracks_.find(n.text);
    if (it == tracks_.end()) {
      Error(n.span, "unknown track '" + n.text + "'");
      return std::nullopt;
    }
    return it->second;
  }

  std::optional<ValueId> LookupValue(int track, const Name& n) {
    const auto& values = track_values_[track];
    auto it = values.find(n.text);
    if (it == values.end()) {
      Error(n.span, "track '" + raw_.tracks[TrackIndex(track)].name.text +
                        "' has no value '" + n.text + "'");
      return std::nullopt;
    }
    return static_cast<ValueId>(it->second);
  }

  // Maps a resolved track id back to its raw declaration (duplicates skipped).
  std::size_t TrackIndex(int track) {
    int seen = -1;
    std::map<std::string, bool> names;
    for (std::size_t i = 0; i < raw_.tracks.size(); ++i) {
      if (names[raw_.tracks[i].name.text]) continue;
      names[raw_.tracks[i].name.text] = true;
      if (++seen == track) return i;
    }
    return 0;
  }

  StateSetExpr Resolve(const RawExpr& e) {
    switch (e.kind) {
      case RawExpr::Kind::kTrue:
        return StateSetExpr::True();
      case RawExpr::Kind::kFalse:
        return StateSetExpr::False();
      case RawExpr::Kind::kLiteral:
      case RawExpr::Kind::kNotLiteral: {
        auto tid = LookupTrack(e.a);
        if (!tid) return StateSetExpr::False();
        auto vid = LookupValue(*tid, e.b);
        if (!vid) return StateSetExpr::False();
        auto lit = StateSetExpr::Literal(*tid, *vid);
        return e.kind == RawExpr::Kind::kLiteral ? lit : StateSetExpr::Not(std::move(lit));
      }
      case RawExpr::Kind::kRef: {
        auto it = sets_.find(e.a.text);
        if (it == sets_.end()) {
          if (tracks_.count(e.a.text)) {
            Error(e.a.span, "track '" + e.a.text + "' used without '= value'");
          } else {
            Error(e.a.span, "unknown set '" + e.a.text + "'");
          }
          return StateSetExpr::False();
        }
        return StateSetExpr::Ref(it->second);
      }
      case RawExpr::Kind::kNot:
        return StateSetExpr::Not(Resolve(e.children[0]));
      case RawExpr::Kind::kAnd:
      case RawExpr::Kind::kOr: {
        std::vector<StateSetExpr> children;
        for (const RawExpr& c : e.children) children.push_back(Resolve(c));
        return e.kind == RawExpr::Kind::kAnd ? StateSetExpr::And(std::move(children))
                                             : StateSetExpr::Or(std::move(children));
      }
    }
    return StateSetExpr::False();
  }

  static void Refs(const StateSetExpr& e, std::vector<int>& out) {
    if (e.kind == StateSetExpr::Kind::kRef) out.push_back(e.ref);
    for (const auto& c : e.children) Refs(c, out);
  }

  void CheckSetCycles(const GameSystem& sys) {
    const int n = static_cast<int>(sys.named_sets.size());
    std::vector<std::vector<int>> edges(n);
    for (int i = 0; i < n; ++i) Refs(sys.named_sets[i].expr, edges[i]);
    std::vector<int> color(n, 0);
    for (int start = 0; start < n; ++start) {
      if (color[start]) continue;
      std::vector<std::pair<int, std::size_t>> stack{{start, 0}};
      color[start] = 1;
      while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < edges[v].size()) {
          int w = edges[v][next++];
          if (w < 0 || w >= n) continue;
          if (color[w] == 1) {
            Error(set_spans_[w], "set '" + sys.named_sets[w].name + "' is defined in terms of itself");
          } else if (color[w] == 0) {
            color[w] = 1;
            stack.emplace_back(w, 0);
          }
        } else {
          color[v] = 2;
          stack.pop_back();
        }
      }
    }
  }

  std::optional<Probability> ParseProbability(const RawResult& r) {
    auto parse = [&](const Name& n) -> std::optional<std::uint64_t> {
      if (n.text.empty() || n.text.size() > 19 ||
          !std::all_of(n.text.begin(), n.text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        Error(n.span, "invalid probability '" + n.text + "'");
        return std::nullopt;
      }
      return std::stoull(n.text);
    };
    auto num = parse(r.num);
    if (!num) return std::nullopt;
    std::uint64_t den = 1;
    if (r.den) {
      auto d = parse(*r.den);
      if (!d) return std::nullopt;
      den = *d;
    }
    if (den == 0) {
      Error(r.span, "probability has zero denominator");
      return std::nullopt;
    }
    Probability p(*num, den);
    if (p.IsZero() || Probability::One() < p) {
      Error(r.span, "probability " + p.ToString() + " is outside (0, 1]");
      return std::nullopt;
    }
    return p;
  }

  RawSystem& raw_;
  const std::string& path_;
  std::vector<Diagnostic>& errors_;
  std::vector<Diagnostic>& warnings_;
  std::map<std::string, int> players_, tracks_, decisions_, outcomes_, sets_, actions_;
  std::vector<std::map<std::string, int>> track_values_;
  std::vector<SourceSpan> set_spans_;
};

bool HasErrors(const std::vector<Diagnostic>& d) {
  return std::any_of(d.begin(), d.end(),
                     [](const Diagnostic& x) { return x.severity == Diagnostic::Severity::kError; });
}

// Macro templates repeat diagnostics once per instantiation; keep the first.
[[noreturn]] void Fail(std::vector<Diagnostic> diagnostics) {
  std::vector<Diagnostic> unique;
  for (Diagnostic& d : diagnostics) {
    bool seen = std::any_of(unique.begin(), unique.end(), [&](const Diagnostic& u) {
      return u.span == d.span && u.message == d.message;
    });
    if (!seen) unique.push_back(std::move(d));
  }
  throw ParseError(std::move(unique));
}

}  // namespace
}  // namespace dsl

SourceFile ParseSource(std::string text, std::string path) {
  SourceFile file;
  file.path = std::move(path);
  file.text = std::move(text);
  std::vector<Diagnostic> errors;
  auto tokens = dsl::Lex(file.text, file.path, errors);
  if (dsl::HasErrors(errors)) dsl::Fail(std::move(errors));
  auto expanded = dsl::Expand(tokens, file.path, errors);
  if (dsl::HasErrors(errors)) dsl::Fail(std::move(errors));
  dsl::Parser parser(expanded, file.path, errors, file.declarations);
  dsl::RawSystem raw = parser.Run();
  if (dsl::HasErrors(errors)) dsl::Fail(std::move(errors));
  dsl::Resolver resolver(raw, file.path, errors, file.warnings);
  file.system = resolver.Run();
  if (dsl::HasErrors(errors)) dsl::Fail(std::move(errors));
  for (const std::string& message : file.system.Validate()) {
    errors.push_back({file.path, {1, 1}, Diagnostic::Severity::kError, message});
  }
  if (!errors.empty()) dsl::Fail(std::move(errors));
  return file;
}

GameSystem Parse(std::string_view text, std::string_view path) {
  return ParseSource(std::string(text), std::string(path)).system;
}

GameSystem ParseFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError({{path, {0, 0}, Diagnostic::Severity::kError, "cannot open file"}});
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str(), path);
}

std::string ExpandMacros(std::string_view text, std::string_view path) {
  std::vector<Diagnostic> errors;
  std::string p(path);
  auto tokens = dsl::Lex(text, p, errors);
  if (dsl::HasErrors(errors)) dsl::Fail(std::move(errors));
  auto expanded = dsl::Expand(tokens, p, errors);
  if (dsl::HasErrors(errors)) dsl::Fail(std::move(errors));
  return dsl::Render(expanded);
}

}  // namespace ludeq
