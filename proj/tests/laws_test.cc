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

#include <gtest/gtest.h>

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ludeq/equivalence.h"
#include "ludeq/reduce.h"
#include "test_support.h"

namespace ludeq {
namespace {

struct Item {
  std::string name;
  Forest forest;
};

const std::vector<Item>& Corpus() {
  static const std::vector<Item> items = [] {
    std::vector<Item> out;
    for (const auto& g : testing::GameCorpus()) {
      out.push_back({g + "@2", testing::DepthForest(g, 2)});
      out.push_back({g + "@3", testing::DepthForest(g, 3)});
    }
    out.push_back({"mini.game", testing::FullForest("mini.game")});
    out.push_back({"mini_misere.game", testing::FullForest("mini_misere.game")});
    for (const auto& t : testing::TreeCorpus()) out.push_back({t, {testing::TreeFixture(t)}});
    out.push_back({"order_split.json", {testing::TreeFixture("order_split.json")}});
    return out;
  }();
  return items;
}

// A predicate with witnesses: the pair it relates plus the witness.
struct Related {
  Forest a, b;
  Witness w;
};
using Search = std::function<std::optional<Related>(const Forest&, const Forest&)>;

Search Relabeling(PinOptions pins) {
  return [pins](const Forest& a, const Forest& b) -> std::optional<Related> {
    auto w = FindRelabelingWitness(a, b, pins);
    if (!w) return std::nullopt;
    return Related{a, b, *w};
  };
}

Search Agency(PinOptions pins) {
  return [pins](const Forest& a, const Forest& b) -> std::optional<Related> {
    AgencyResult r = AgencyEquivalence(a, b, pins);
    if (!r.equivalent()) return std::nullopt;
    return Related{r.normal_a, r.normal_b, *r.witness};
  };
}

void CheckLaws(const Search& search, const PinOptions& pins) {
  const auto& items = Corpus();
  const std::size_t n = items.size();
  std::vector<std::vector<std::optional<Related>>> rel(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rel[i].push_back(search(items[i].forest, items[j].forest));
  }
  int related_pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ASSERT_TRUE(rel[i][i].has_value()) << "reflexivity " << items[i].name;
    EXPECT_TRUE(VerifyWitness(rel[i][i]->a, rel[i][i]->b, rel[i][i]->w, pins).empty()) << items[i].name;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& ij = rel[i][j];
      ASSERT_EQ(ij.has_value(), rel[j][i].has_value()) << "symmetry " << items[i].name << " " << items[j].name;
      if (!ij) continue;
      if (i != j) ++related_pairs;
      EXPECT_TRUE(VerifyWitness(ij->a, ij->b, ij->w, pins).empty()) << items[i].name << " " << items[j].name;
      Witness inv = Invert(ij->w, ij->a, ij->b);
      EXPECT_TRUE(VerifyWitness(ij->b, ij->a, inv, pins).empty())
          << "inverse " << items[i].name << " " << items[j].name;
      for (std::size_t k = 0; k < n; ++k) {
        const auto& jk = rel[j][k];
        if (!jk) continue;
        ASSERT_TRUE(rel[i][k].has_value())
            << "transitivity " << items[i].name << " " << items[j].name << " " << items[k].name;
        // Normal forms are deterministic, so ij->b and jk->a are the same forest.
        ASSERT_TRUE(ij->b == jk->a);
        Witness ik = Compose(ij->w, jk->w);
        EXPECT_TRUE(VerifyWitness(ij->a, jk->b, ik, pins).empty())
            << "composition " << items[i].name << " " << items[j].name << " " << items[k].name;
      }
    }
  }
  // The corpus has related pairs in every regime, so the laws are not vacuous.
  EXPECT_GT(related_pairs, 4);
}

TEST(LawsTest, Structural) {
  const auto& items = Corpus();
  const std::size_t n = items.size();
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rel[i][j] = StructurallyEquivalent(items[i].forest, items[j].forest);
  }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_TRUE(rel[i][i]) << items[i].name;
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(rel[i][j], rel[j][i]) << items[i].name << " " << items[j].name;
      for (std::size_t k = 0; k < n; ++k) {
        if (rel[i][j] && rel[j][k]) {
          EXPECT_TRUE(rel[i][k]) << items[i].name << " " << items[j].name << " " << items[k].name;
        }
      }
    }
  }
}

TEST(LawsTest, RelabelingUnpinned) { CheckLaws(Relabeling(PinOptions::None()), PinOptions::None()); }

TEST(LawsTest, RelabelingPinned) {
  const PinOptions p = PinOptions::PlayersAndOutcomes();
  CheckLaws(Relabeling(p), p);
}

TEST(LawsTest, AgencyUnpinned) { CheckLaws(Agency(PinOptions::None()), PinOptions::None()); }

TEST(LawsTest, AgencyPinned) {
  const PinOptions p = PinOptions::PlayersAndOutcomes();
  CheckLaws(Agency(p), p);
}

}  // namespace
}  // namespace ludeq
