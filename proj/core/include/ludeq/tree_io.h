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

#ifndef LUDEQ_TREE_IO_H_
#define LUDEQ_TREE_IO_H_

// JSON tree documents:
//
//   {"players": [...], "outcomes": [...], "decisions": [...], "root": ID,
//    "nodes": [{"id": ID, "kind": "state"|"chance"|"terminal",
//               "state": "...", "outcome": "...", "truncated": true}],
//    "edges": [{"from": ID, "to": ID, "kind": "decision",
//               "tuples": [[["a", null], ...], ...]},
//              {"from": ID, "to": ID, "kind": "chance", "prob": "1/2"}]}
//
// IDs are integers or strings. "tuples" is a set of sequences of tuples; a
// bare tuple is read as a one-step sequence and [] is the empty-domain label.
// "outcomes" and "decisions" are optional and fix table order. A forest is
// {"forest": [tree, ...]}.

#include <string>

#include "ludeq/game_tree.h"

namespace ludeq {

std::string ExportJson(const GameTree& tree, int indent = -1);
std::string ExportForestJson(const Forest& forest, int indent = -1);

// Throw TreeFormatError on malformed documents or invariant violations,
// naming the offending node by its document id.
GameTree ImportJson(const std::string& text);
// Accepts a forest document or a single tree (returned as a forest of one).
Forest ImportForestJson(const std::string& text);

struct DotOptions {
  bool state_labels = true;
  std::string graph_name = "game_tree";
};
std::string ExportDot(const GameTree& tree, const DotOptions& options = {});

}  // namespace ludeq

#endif  // LUDEQ_TREE_IO_H_
