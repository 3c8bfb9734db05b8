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

#ifndef LUDEQ_DSL_LEXER_H_
#define LUDEQ_DSL_LEXER_H_

#include <string>
#include <string_view>
#include <vector>

#include "ludeq/dsl.h"

namespace ludeq::dsl {

struct Token {
  enum class Kind { kIdent, kString, kPunct, kEnd };

  Kind kind = Kind::kEnd;
  // Identifier and string text still carries macro markers ($i, ${i}, $$)
  // until expansion; punctuation holds its spelling.
  std::string text;
  SourceSpan span;

  bool IsPunct(std::string_view p) const { return kind == Kind::kPunct && text == p; }
  bool IsKeyword(std::string_view k) const { return kind == Kind::kIdent && text == k; }
  bool IsName() const { return kind == Kind::kIdent || kind == Kind::kString; }
};

bool IsKeyword(std::string_view word);

// Splits source text into tokens, ending with a kEnd token. Lexical errors
// are appended to `diagnostics`.
std::vector<Token> Lex(std::string_view text, const std::string& path,
                       std::vector<Diagnostic>& diagnostics);

// Renders tokens back to source text that lexes to the same sequence.
std::string Render(const std::vector<Token>& tokens);

}  // namespace ludeq::dsl

#endif  // LUDEQ_DSL_LEXER_H_
