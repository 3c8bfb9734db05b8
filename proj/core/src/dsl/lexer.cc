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

#include "dsl/lexer.h"

#include <array>
#include <cctype>

namespace ludeq::dsl {
namespace {

constexpr std::array<std::string_view, 23> kKeywords = {
    "game",    "players", "track", "decisions", "outcomes", "set",
    "action",  "when",    "legal", "consequence", "prob",   "outcome",
    "default", "init",    "forall", "in",       "where",    "any",
    "all",     "not",     "and",   "or",        "true"};

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool IsStatementKeyword(std::string_view t) {
  return t == "game" || t == "players" || t == "track" || t == "decisions" ||
         t == "outcomes" || t == "set" || t == "action" || t == "legal" ||
         t == "consequence" || t == "outcome" || t == "init" || t == "forall";
}

}  // namespace

bool IsKeyword(std::string_view word) {
  if (word == "false") return true;
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> Lex(std::string_view text, const std::string& path,
                       std::vector<Diagnostic>& diagnostics) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  int line = 1;
  int column = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      unsigned char c = static_cast<unsigned char>(text[i]);
      if (c == '\n') {
        ++line;
        column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++column;  // count code points, not UTF-8 continuation bytes
      }
    }
  };
  auto error = [&](SourceSpan span, std::string message) {
    diagnostics.push_back({path, span, Diagnostic::Severity::kError, std::move(message)});
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourceSpan span{line, column};
    if (IsIdentChar(c) || c == '$') {
      std::string word;
      while (i < text.size()) {
        char d = text[i];
        if (IsIdentChar(d)) {
          word += d;
          advance(1);
        } else if (d == '$') {
          word += d;
          advance(1);
          if (i < text.size() && text[i] == '{') {
            std::size_t close = text.find('}', i);
            if (close == std::string_view::npos) {
              error(span, "unterminated ${...} interpolation");
              break;
            }
            word.append(text.substr(i, close - i + 1));
            advance(close - i + 1);
          }
        } else {
          break;
        }
      }
      tokens.push_back({Token::Kind::kIdent, std::move(word), span});
      continue;
    }
    if (c == '"') {
      advance(1);
      std::string value;
      bool closed = false;
      while (i < text.size()) {
        char d = text[i];
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\' && i + 1 < text.size()) {
          char e = text[i + 1];
          if (e == 'n') {
            value += '\n';
          } else if (e == '"' || e == '\\') {
            value += e;
          } else {
            error({line, column}, std::string("unknown escape \\") + e);
          }
          advance(2);
          continue;
        }
        value += d;
        advance(1);
      }
      if (!closed) error(span, "unterminated string");
      tokens.push_back({Token::Kind::kString, std::move(value), span});
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == "->" || two == ".." || two == "!=" || two == "==" || two == "<=" ||
        two == ">=") {
      tokens.push_back({Token::Kind::kPunct, std::string(two), span});
      advance(2);
      continue;
    }
    if (std::string_view("{}(),;:=*/+-<>%").find(c) != std::string_view::npos) {
      tokens.push_back({Token::Kind::kPunct, std::string(1, c), span});
      advance(1);
      continue;
    }
    error(span, std::string("unexpected character '") + c + "'");
    advance(1);
  }
  tokens.push_back({Token::Kind::kEnd, "", {line, column}});
  return tokens;
}

std::string Render(const std::vector<Token>& tokens) {
  std::string out;
  int depth = 0;
  bool line_start = true;
  auto newline = [&]() {
    if (!line_start) out += '\n';
    line_start = true;
  };
  for (const Token& t : tokens) {
    if (t.kind == Token::Kind::kEnd) break;
    if (depth == 0 && t.kind == Token::Kind::kIdent && IsStatementKeyword(t.text)) {
      newline();
    }
    if (t.IsPunct("}")) --depth;
    if (!line_start) out += ' ';
    line_start = false;
    switch (t.kind) {
      case Token::Kind::kIdent:
        for (char c : t.text) {
          out += c;
          if (c == '$') out += '$';  // literal dollar after expansion
        }
        break;
      case Token::Kind::kPunct:
        out += t.text;
        break;
      case Token::Kind::kString: {
        out += '"';
        for (char c : t.text) {
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
        out += '"';
        break;
      }
      case Token::Kind::kEnd:
        break;
    }
    if (t.IsPunct("{")) ++depth;
  }
  newline();
  return out;
}

}  // namespace ludeq::dsl
