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

#include "dsl/macro.h"

#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <tuple>
#include <utility>

namespace ludeq::dsl {
namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

std::optional<long long> AsInteger(const std::string& s) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

const std::string* Lookup(const Env& env, const std::string& name) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == name) return &it->second;
  }
  return nullptr;
}

bool IsPlainName(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

struct Binder {
  std::string name;
  std::vector<std::string> values;
};

class Expander {
 public:
  Expander(const std::vector<Token>& tokens, const std::string& path,
           std::vector<Diagnostic>& diagnostics)
      : tokens_(tokens), path_(path), diagnostics_(diagnostics) {}

  std::vector<Token> Run() {
    Env env;
    ExpandRange(0, tokens_.size() - 1, env);
    out_.push_back(tokens_.back());
    return std::move(out_);
  }

 private:
  void Error(SourceSpan span, std::string message) {
    if (!reported_.insert({span.line, span.column, message}).second) return;
    diagnostics_.push_back({path_, span, Diagnostic::Severity::kError, std::move(message)});
  }

  std::string Interpolate(const Token& tok, const Env& env) {
    const std::string& s = tok.text;
    if (s.find('$') == std::string::npos) return s;
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] != '$') {
        out += s[i];
        continue;
      }
      if (i + 1 < s.size() && s[i + 1] == '$') {
        out += '$';
        ++i;
        continue;
      }
      std::string name;
      if (i + 1 < s.size() && s[i + 1] == '{') {
        std::size_t close = s.find('}', i);
        if (close == std::string::npos) {
          Error(tok.span, "unterminated ${...} interpolation");
          return out;
        }
        name = s.substr(i + 2, close - i - 2);
        i = close;
      } else {
        std::size_t j = i + 1;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        name = s.substr(i + 1, j - i - 1);
        i = j - 1;
      }
      const std::string* value = Lookup(env, name);
      if (value == nullptr) {
        Error(tok.span, "unbound macro variable '" + name + "'");
        continue;
      }
      out += *value;
    }
    return out;
  }

  // Index of the '}' matching the '{' at `open`, or npos.
  std::size_t MatchBrace(std::size_t open, std::size_t end) {
    int depth = 0;
    for (std::size_t i = open; i < end; ++i) {
      if (tokens_[i].IsPunct("{")) ++depth;
      if (tokens_[i].IsPunct("}") && --depth == 0) return i;
    }
    return std::string::npos;
  }

  // Parses "NAME in LIST, ... [where GUARD] {" starting at `pos`. On success
  // sets guard range and the body's opening brace.
  bool ParseHeader(std::size_t& pos, std::size_t end, const Env& env,
                   std::vector<Binder>& binders, std::size_t& guard_begin,
                   std::size_t& guard_end) {
    const SourceSpan head = tokens_[pos - 1].span;
    while (true) {
      if (pos >= end || tokens_[pos].kind != Token::Kind::kIdent ||
          !IsPlainName(tokens_[pos].text) || IsKeyword(tokens_[pos].text)) {
        Error(pos < end ? tokens_[pos].span : head, "expected macro variable name");
        return false;
      }
      Binder b{tokens_[pos].text, {}};
      ++pos;
      if (pos >= end || !tokens_[pos].IsKeyword("in")) {
        Error(pos < end ? tokens_[pos].span : head, "expected 'in' after macro variable");
        return false;
      }
      ++pos;
      if (pos < end && tokens_[pos].IsPunct("{")) {
        ++pos;
        while (pos < end && !tokens_[pos].IsPunct("}")) {
          if (!tokens_[pos].IsName()) {
            Error(tokens_[pos].span, "expected value in macro list");
            return false;
          }
          b.values.push_back(Interpolate(tokens_[pos], env));
          ++pos;
          if (pos < end && tokens_[pos].IsPunct(",")) ++pos;
        }
        if (pos >= end) {
          Error(head, "unterminated macro list");
          return false;
        }
        ++pos;
      } else {
        if (pos + 2 >= end || !tokens_[pos].IsName() || !tokens_[pos + 1].IsPunct("..") ||
            !tokens_[pos + 2].IsName()) {
          Error(pos < end ? tokens_[pos].span : head, "expected '{...}' or 'LO..HI' range");
          return false;
        }
        auto lo = AsInteger(Interpolate(tokens_[pos], env));
        auto hi = AsInteger(Interpolate(tokens_[pos + 2], env));
        if (!lo || !hi) {
          Error(tokens_[pos].span, "range bounds must be integers");
          return false;
        }
        if (*hi - *lo > 1'000'000) {
          Error(tokens_[pos].span, "range too large");
          return false;
        }
        for (long long v = *lo; v <= *hi; ++v) b.values.push_back(std::to_string(v));
        pos += 3;
      }
      binders.push_back(std::move(b));
      if (pos < end && tokens_[pos].IsPunct(",")) {
        ++pos;
        continue;
      }
      break;
    }
    guard_begin = guard_end = pos;
    if (pos < end && tokens_[pos].IsKeyword("where")) {
      guard_begin = ++pos;
      int depth = 0;
      while (pos < end && !(depth == 0 && tokens_[pos].IsPunct("{"))) {
        if (tokens_[pos].IsPunct("(")) ++depth;
        if (tokens_[pos].IsPunct(")")) --depth;
        ++pos;
      }
      guard_end = pos;
      if (guard_begin == guard_end) {
        Error(head, "empty where clause");
        return false;
      }
    }
    if (pos >= end || !tokens_[pos].IsPunct("{")) {
      Error(pos < end ? tokens_[pos].span : head, "expected '{' to open macro body");
      return false;
    }
    return true;
  }

  // Guard evaluation.
  struct Value {
    enum class Kind { kBool, kInt, kString } kind = Kind::kBool;
    bool b = false;
    long long i = 0;
    std::string s;
  };

  struct GuardState {
    std::size_t pos;
    std::size_t end;
    const Env* env;
    bool failed = false;
  };

  void GuardError(GuardState& g, std::string message) {
    if (!g.failed) {
      std::size_t at = g.pos < g.end ? g.pos : g.end - 1;
      Error(tokens_[at].span, std::move(message));
    }
    g.failed = true;
  }

  Value GuardOr(GuardState& g) {
    Value v = GuardAnd(g);
    while (!g.failed && g.pos < g.end && tokens_[g.pos].IsKeyword("or")) {
      ++g.pos;
      Value r = GuardAnd(g);
      v = Bool(ToBool(g, v) || ToBool(g, r));
    }
    return v;
  }

  Value GuardAnd(GuardState& g) {
    Value v = GuardNot(g);
    while (!g.failed && g.pos < g.end && tokens_[g.pos].IsKeyword("and")) {
      ++g.pos;
      Value r = GuardNot(g);
      v = Bool(ToBool(g, v) && ToBool(g, r));
    }
    return v;
  }

  Value GuardNot(GuardState& g) {
    if (g.pos < g.end && tokens_[g.pos].IsKeyword("not")) {
      ++g.pos;
      Value v = GuardNot(g);
      return Bool(!ToBool(g, v));
    }
    return GuardCompare(g);
  }

  Value GuardCompare(GuardState& g) {
    Value l = GuardAdd(g);
    if (g.failed || g.pos >= g.end) return l;
    const Token& op = tokens_[g.pos];
    if (op.kind != Token::Kind::kPunct) return l;
    const std::string& o = op.text;
    if (o != "=" && o != "==" && o != "!=" && o != "<" && o != "<=" && o != ">" && o != ">=") {
      return l;
    }
    ++g.pos;
    Value r = GuardAdd(g);
    if (g.failed) return l;
    if (o == "=" || o == "==" || o == "!=") {
      bool eq = Text(l) == Text(r);
      return Bool(o == "!=" ? !eq : eq);
    }
    auto a = Int(g, l), b = Int(g, r);
    if (o == "<") return Bool(a < b);
    if (o == "<=") return Bool(a <= b);
    if (o == ">") return Bool(a > b);
    return Bool(a >= b);
  }

  Value GuardAdd(GuardState& g) {
    Value v = GuardMul(g);
    while (!g.failed && g.pos < g.end &&
           (tokens_[g.pos].IsPunct("+") || tokens_[g.pos].IsPunct("-"))) {
      bool plus = tokens_[g.pos].IsPunct("+");
      ++g.pos;
      Value r = GuardMul(g);
      long long a = Int(g, v), b = Int(g, r);
      v = IntValue(plus ? a + b : a - b);
    }
    return v;
  }

  Value GuardMul(GuardState& g) {
    Value v = GuardUnary(g);
    while (!g.failed && g.pos < g.end &&
           (tokens_[g.pos].IsPunct("*") || tokens_[g.pos].IsPunct("/") ||
            tokens_[g.pos].IsPunct("%"))) {
      std::string op = tokens_[g.pos].text;
      ++g.pos;
      Value r = GuardUnary(g);
      long long a = Int(g, v), b = Int(g, r);
      if (op == "*") {
        v = IntValue(a * b);
      } else if (b == 0) {
        GuardError(g, "division by zero in where clause");
        return v;
      } else {
        v = IntValue(op == "/" ? a / b : a % b);
      }
    }
    return v;
  }

  Value GuardUnary(GuardState& g) {
    if (g.pos < g.end && tokens_[g.pos].IsPunct("-")) {
      ++g.pos;
      Value v = GuardUnary(g);
      return IntValue(-Int(g, v));
    }
    return GuardPrimary(g);
  }

  Value GuardPrimary(GuardState& g) {
    if (g.pos >= g.end) {
      GuardError(g, "unexpected end of where clause");
      return {};
    }
    const Token& t = tokens_[g.pos];
    if (t.IsPunct("(")) {
      ++g.pos;
      Value v = GuardOr(g);
      if (g.pos >= g.end || !tokens_[g.pos].IsPunct(")")) {
        GuardError(g, "expected ')' in where clause");
        return v;
      }
      ++g.pos;
      return v;
    }
    if (t.IsKeyword("true") || t.IsKeyword("false")) {
      ++g.pos;
      return Bool(t.text == "true");
    }
    if (t.IsName()) {
      ++g.pos;
      std::string text;
      const std::string* bound =
          t.kind == Token::Kind::kIdent ? Lookup(*g.env, t.text) : nullptr;
      text = bound ? *bound : Interpolate(t, *g.env);
      Value v;
      if (auto n = AsInteger(text)) {
        v.kind = Value::Kind::kInt;
        v.i = *n;
      } else {
        v.kind = Value::Kind::kString;
      }
      v.s = std::move(text);
      return v;
    }
    GuardError(g, "unexpected '" + t.text + "' in where clause");
    return {};
  }

  static Value Bool(bool b) {
    Value v;
    v.b = b;
    return v;
  }
  static Value IntValue(long long i) {
    Value v;
    v.kind = Value::Kind::kInt;
    v.i = i;
    v.s = std::to_string(i);
    return v;
  }
  static std::string Text(const Value& v) {
    if (v.kind == Value::Kind::kBool) return v.b ? "true" : "false";
    return v.s;
  }
  bool ToBool(GuardState& g, const Value& v) {
    if (v.kind != Value::Kind::kBool) {
      GuardError(g, "where clause operand is not a boolean");
      return false;
    }
    return v.b;
  }
  long long Int(GuardState& g, const Value& v) {
    if (v.kind != Value::Kind::kInt) {
      GuardError(g, "where clause operand '" + Text(v) + "' is not an integer");
      return 0;
    }
    return v.i;
  }

  bool EvalGuard(std::size_t begin, std::size_t end, const Env& env) {
    if (begin == end) return true;
    GuardState g{begin, end, &env};
    Value v = GuardOr(g);
    if (!g.failed && g.pos != end) GuardError(g, "trailing tokens in where clause");
    if (g.failed) return false;
    return ToBool(g, v) && !g.failed;
  }

  void Emit(Token t) {
    if (overflow_) return;
    if (out_.size() >= kMaxExpandedTokens) {
      overflow_ = true;
      Error(t.span, "macro expansion exceeds token limit");
      return;
    }
    out_.push_back(std::move(t));
  }

  // Calls `body` once per binding (first binder outermost) passing the guard.
  template <typename F>
  void ForEachBinding(const std::vector<Binder>& binders, std::size_t k, Env& env,
                      std::size_t guard_begin, std::size_t guard_end, F&& body) {
    if (overflow_) return;
    if (k == binders.size()) {
      if (EvalGuard(guard_begin, guard_end, env)) body();
      return;
    }
    for (const std::string& v : binders[k].values) {
      env.emplace_back(binders[k].name, v);
      ForEachBinding(binders, k + 1, env, guard_begin, guard_end, body);
      env.pop_back();
    }
  }

  void ExpandRange(std::size_t begin, std::size_t end, Env& env) {
    std::size_t pos = begin;
    while (pos < end && !overflow_) {
      const Token& t = tokens_[pos];
      bool is_forall = t.IsKeyword("forall");
      bool is_any = t.IsKeyword("any");
      bool is_all = t.IsKeyword("all");
      if (!is_forall && !is_any && !is_all) {
        Token copy = t;
        if (copy.IsName()) copy.text = Interpolate(t, env);
        Emit(std::move(copy));
        ++pos;
        continue;
      }
      const SourceSpan span = t.span;
      ++pos;
      std::vector<Binder> binders;
      std::size_t guard_begin = 0, guard_end = 0;
      if (!ParseHeader(pos, end, env, binders, guard_begin, guard_end)) {
        // Skip to the end of the body if one can be found.
        while (pos < end && !tokens_[pos].IsPunct("{")) ++pos;
        std::size_t close = pos < end ? MatchBrace(pos, end) : std::string::npos;
        pos = close == std::string::npos ? end : close + 1;
        continue;
      }
      std::size_t open = pos;
      std::size_t close = MatchBrace(open, end);
      if (close == std::string::npos) {
        Error(tokens_[open].span, "unbalanced '{' in macro body");
        pos = end;
        continue;
      }
      auto synth = [&](std::string text, Token::Kind kind = Token::Kind::kPunct) {
        Emit(Token{kind, std::move(text), span});
      };
      if (is_forall) {
        ForEachBinding(binders, 0, env, guard_begin, guard_end,
                       [&] { ExpandRange(open + 1, close, env); });
      } else {
        bool first = true;
        synth("(");
        ForEachBinding(binders, 0, env, guard_begin, guard_end, [&] {
          if (!first) synth(is_any ? "or" : "and", Token::Kind::kIdent);
          first = false;
          synth("(");
          ExpandRange(open + 1, close, env);
          synth(")");
        });
        if (first) synth(is_any ? "false" : "true", Token::Kind::kIdent);
        synth(")");
      }
      pos = close + 1;
    }
  }

  const std::vector<Token>& tokens_;
  const std::string& path_;
  std::vector<Diagnostic>& diagnostics_;
  std::vector<Token> out_;
  std::set<std::tuple<int, int, std::string>> reported_;
  bool overflow_ = false;
};

}  // namespace

std::vector<Token> Expand(const std::vector<Token>& tokens, const std::string& path,
                          std::vector<Diagnostic>& diagnostics) {
  return Expander(tokens, path, diagnostics).Run();
}

}  // namespace ludeq::dsl
