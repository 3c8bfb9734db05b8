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

#ifndef LUDEQ_DSL_H_
#define LUDEQ_DSL_H_

// Textual grammar for game systems. The full grammar is documented in
// docs/grammar.md; in short:
//
//   game NAME
//   players P1, P2
//   track NAME { v1, v2, ... }
//   decisions d1, d2, ...
//   outcomes o1, o2, ...                       (optional)
//   set NAME = EXPR
//   action NAME { when EXPR set t = v, ... ; ... }
//   legal PLAYER DECISION when EXPR
//   consequence (PAT, ...) when EXPR -> prob P: A1, A2 ; prob P: ...
//   outcome NAME when EXPR
//   outcome default NAME
//   init EXPR
//   forall i in 1..9, p in {X, O} where GUARD { ... }
//
// `any`/`all` are the expression-level forms of forall. Identifiers
// interpolate macro variables with $i or ${i}.

#include <string>
#include <string_view>
#include <vector>

#include "ludeq/errors.h"
#include "ludeq/game_system.h"

namespace ludeq {

struct SourceSpan {
  int line = 0;
  int column = 0;

  bool operator==(const SourceSpan&) const = default;
};

struct Diagnostic {
  enum class Severity { kError, kWarning };

  std::string path;
  SourceSpan span;
  Severity severity = Severity::kError;
  std::string message;

  // "path:line:col: severity: message"
  std::string Format() const;
};

class ParseError : public Error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// A parsed source with the location of every top-level declaration.
struct SourceFile {
  struct Declaration {
    std::string keyword;
    std::string name;  // empty for anonymous declarations (legal, init, ...)
    SourceSpan span;
  };

  std::string path;
  std::string text;
  std::vector<Declaration> declarations;
  std::vector<Diagnostic> warnings;
  GameSystem system;
};

// Parses, macro-expands and validates. Throws ParseError carrying every
// diagnostic found.
GameSystem Parse(std::string_view text, std::string_view path = "<input>");
SourceFile ParseSource(std::string text, std::string path = "<input>");
// Reads and parses a file; an unreadable path raises ParseError.
GameSystem ParseFile(const std::string& path);

// The source after macro expansion, with no forall/any/all left.
std::string ExpandMacros(std::string_view text, std::string_view path = "<input>");

// Canonical text for a valid system; Parse(Serialize(sys)) == sys. Macros are
// not reconstructed.
std::string Serialize(const GameSystem& sys);

// Renders a name bare when it is a plain identifier, quoted otherwise.
std::string QuoteName(std::string_view name);

}  // namespace ludeq

#endif  // LUDEQ_DSL_H_
