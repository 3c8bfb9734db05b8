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

#ifndef LUDEQ_DSL_MACRO_H_
#define LUDEQ_DSL_MACRO_H_

#include <string>
#include <vector>

#include "dsl/lexer.h"

namespace ludeq::dsl {

// Expands forall/any/all and resolves $-interpolation. The result contains
// no macro forms; identifier and string text is final.
std::vector<Token> Expand(const std::vector<Token>& tokens, const std::string& path,
                          std::vector<Diagnostic>& diagnostics);

// Cap on the number of tokens a single source may expand to.
inline constexpr std::size_t kMaxExpandedTokens = 20'000'000;

}  // namespace ludeq::dsl

#endif  // LUDEQ_DSL_MACRO_H_
