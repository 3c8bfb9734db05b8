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

#ifndef LUDEQ_CANONICAL_H_
#define LUDEQ_CANONICAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ludeq/game_tree.h"

namespace ludeq {

// Which label classes must be preserved exactly. Decisions are always
// abstracted. With an explicit map, pinning means "identical after mapping
// names through it" instead of identity by name.
struct PinOptions {
  bool players = false;
  bool outcomes = false;
  bool states = false;  // debugging aid only
  std::optional<std::map<std::string, std::string>> player_map;
  std::optional<std::map<std::string, std::string>> outcome_map;

  static PinOptions None() { return {}; }
  static PinOptions PlayersAndOutcomes() {
    PinOptions p;
    p.players = p.outcomes = true;
    return p;
  }
};

// Table-independent byte string; equal keys iff the trees are equivalent up
// to relabeling under the same pin regime.
struct CanonicalKey {
  std::string bytes;
  bool players_pinned = false;
  bool outcomes_pinned = false;
  bool states_pinned = false;

  bool operator==(const CanonicalKey&) const = default;
};

CanonicalKey CanonicalForm(const GameTree& tree, const PinOptions& pins = {});
CanonicalKey CanonicalForm(const Forest& forest, const PinOptions& pins = {});

// Interns subtree signatures into dense class ids. Ids from the same table
// are comparable across trees.
class CanonicalTable {
 public:
  int Intern(const std::vector<std::int64_t>& signature);
  std::optional<int> Find(const std::vector<std::int64_t>& signature) const;
  std::int64_t NameCode(const std::string& name);
  std::optional<std::int64_t> FindName(const std::string& name) const;
  std::size_t size() const { return signatures_.size(); }
  const std::vector<std::int64_t>& signature(int id) const { return signatures_[id]; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  struct Hash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept;
  };
  std::unordered_map<std::vector<std::int64_t>, int, Hash> index_;
  std::vector<std::vector<std::int64_t>> signatures_;
  std::unordered_map<std::string, std::int64_t> name_index_;
  std::vector<std::string> names_;
};

// Fixes how players and outcomes of one tree are encoded: players occupy
// matrix axis slots, outcomes and states map to integer codes.
struct LabelAssignment {
  std::vector<int> player_slot;             // per player id
  std::vector<std::int64_t> outcome_code;   // per outcome id
  std::vector<std::int64_t> state_code;     // per state index; empty = ignore
};

// Subtree class of every node reachable from the root (-1 elsewhere).
std::vector<int> SubtreeClasses(const GameTree& tree, const LabelAssignment& assignment,
                                CanonicalTable& table);

// Identity slots and outcome ids as codes: the "identical players and
// outcomes" regime used when comparing subtrees of one tree.
LabelAssignment IdentityAssignment(const GameTree& tree);

}  // namespace ludeq

#endif  // LUDEQ_CANONICAL_H_
