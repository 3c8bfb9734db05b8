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

#ifndef LUDEQ_EQUIVALENCE_H_
#define LUDEQ_EQUIVALENCE_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ludeq/canonical.h"
#include "ludeq/game_tree.h"

namespace ludeq {

// ---- Structural equivalence ----

// The bare shape of a tree: kinds, labels, states and probabilities dropped.
struct Skeleton {
  std::vector<std::vector<NodeId>> children;  // indexed by original node id
  NodeId root = -1;
};

Skeleton Strip(const GameTree& tree);
bool StructurallyEquivalent(const GameTree& a, const GameTree& b);
bool StructurallyEquivalent(const Forest& a, const Forest& b);

// Enumerates every isomorphism between two skeletons, one at a time. Each
// result maps node ids of `a` to node ids of `b` (-1 for unreachable ids).
class CorrespondenceStream {
 public:
  CorrespondenceStream(const GameTree& a, const GameTree& b);
  std::optional<std::vector<NodeId>> Next();

 private:
  bool Build();

  Skeleton a_, b_;
  std::vector<int> class_a_, class_b_;
  bool isomorphic_ = false;
  bool started_ = false;
  bool done_ = false;
  std::vector<std::vector<int>> frames_;
  std::vector<NodeId> current_;
};

// ---- Relabeling equivalence ----

struct TreeWitness {
  int tree_b = 0;                   // index of the matched tree in forest b
  std::vector<NodeId> node_map;     // a node -> b node, -1 if unreachable
  std::vector<EdgeId> edge_map;     // a edge -> b edge, -1 if unreachable
  // Per state node of a: per player p of a, pairs (index into a's
  // choices[p], index into b's choices[pi(p)]).
  std::map<NodeId, std::vector<std::vector<std::pair<int, int>>>> choice_maps;
};

struct Witness {
  std::vector<int> player_map;       // a player -> b player
  std::map<int, int> outcome_map;    // used a outcome -> b outcome
  std::vector<TreeWitness> trees;    // one per tree of a
};

// Pairs of matching choices, per player of `a`, if D_a and D_b match under
// the player bijection and the edge map; nullopt otherwise.
std::optional<std::vector<std::vector<std::pair<int, int>>>> MatchMatrices(
    const DecisionMatrix& a, const DecisionMatrix& b, const std::vector<int>& player_map,
    const std::function<EdgeId(EdgeId)>& edge_map);

std::optional<Witness> FindRelabelingWitness(const GameTree& a, const GameTree& b,
                                             const PinOptions& pins = {});
std::optional<Witness> FindRelabelingWitness(const Forest& a, const Forest& b,
                                             const PinOptions& pins = {});
bool RelabelingEquivalent(const GameTree& a, const GameTree& b, const PinOptions& pins = {});
bool RelabelingEquivalent(const Forest& a, const Forest& b, const PinOptions& pins = {});

// Checks every condition of the witness independently of the search; returns
// the violations (empty when valid).
std::vector<std::string> VerifyWitness(const Forest& a, const Forest& b, const Witness& w,
                                       const PinOptions& pins = {});
// Witness from b to a.
Witness Invert(const Witness& w, const Forest& a, const Forest& b);
// Witness from a to c given a->b and b->c.
Witness Compose(const Witness& ab, const Witness& bc);

std::string WitnessToJson(const Witness& w, const Forest& a, const Forest& b, int indent = -1);

}  // namespace ludeq

#endif  // LUDEQ_EQUIVALENCE_H_
