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


// Property suite over generated trees of at most 200 nodes.

#include <iostream>

#include <gtest/gtest.h>

#include "ludeq/canonical.h"
#include "ludeq/equivalence.h"
#include "ludeq/reduce.h"
#include "test_support.h"

namespace ludeq::testing {
namespace {

constexpr int kTrees = 1000;


TEST(GeneratorTest, TreesAreValidAndBounded) {
  Engine rng(1);
  std::size_t total = 0;
  for (int i = 0; i < kTrees; ++i) {
    GameTree t = RandomTree(rng);
    ASSERT_TRUE(t.Validate().empty()) << t.Validate().front();
    ASSERT_LE(t.num_nodes(), 200u);
    total += t.num_nodes();
  }
  // Not degenerate.
  EXPECT_GT(total, 10u * kTrees);
}

// Manual fixed point: one site at a time, checked against oracles.
TEST(ReductionPropertyTest, StepwiseMeasureDecreaseAndConservation) {
  Engine rng(2);
  std::size_t applied = 0, conserved = 0;
  for (int i = 0; i < kTrees; ++i) {
    GameTree t = RandomTree(rng);
    TreeMeasure m = OracleMeasure(t);
    ASSERT_EQ(m, Measure(t));
    for (int guard = 0;; ++guard) {
      ASSERT_LT(guard, 5000) << "no termination";
      std::vector<ReductionSite> sites;
      for (ReductionKind k : {ReductionKind::kMatrixRedundancy, ReductionKind::kBookkeeping,
                              ReductionKind::kSinglePlayer, ReductionKind::kSymmetry}) {
        sites = FindSites(t, k);
        if (!sites.empty()) break;
      }
      if (sites.empty()) break;
      const ReductionSite& site = sites[static_cast<std::size_t>(Below(rng, static_cast<int>(sites.size())))];
      GameTree next = ApplyReduction(t, site);
      ASSERT_TRUE(next.Validate().empty()) << ReductionName(site.kind) << ": " << next.Validate().front();
      TreeMeasure m2 = OracleMeasure(next);
      ASSERT_LT(m2, m) << "tree " << i << " " << ReductionName(site.kind) << " at " << site.root;
      std::string why = CheckConservation(t, site, next);
      ASSERT_TRUE(why.empty()) << "tree " << i << " " << ReductionName(site.kind) << ": " << why;
      if (site.kind == ReductionKind::kBookkeeping || site.kind == ReductionKind::kSymmetry) ++conserved;
      ++applied;
      t = std::move(next);
      m = m2;
    }
    for (ReductionKind k : {ReductionKind::kMatrixRedundancy, ReductionKind::kBookkeeping,
                            ReductionKind::kSinglePlayer, ReductionKind::kSymmetry})
      ASSERT_TRUE(FindSites(t, k).empty());
  }
  EXPECT_GT(applied, 1000u);
  EXPECT_GT(conserved, 300u);
}

TEST(ReductionPropertyTest, NormalizeTraceDecreasesAndIsIdempotent) {
  Engine rng(3);
  for (int i = 0; i < kTrees; ++i) {
    GameTree t = RandomTree(rng);
    ReductionTrace trace;
    GameTree n = Normalize(t, {}, &trace);
    TreeMeasure prev = OracleMeasure(t);
    for (const ReductionStep& s : trace.steps) {
      TreeMeasure before{s.nodes_before, s.choices_before}, after{s.nodes_after, s.choices_after};
      ASSERT_EQ(before, prev) << "tree " << i;
      ASSERT_LT(after, before) << "tree " << i;
      prev = after;
    }
    ASSERT_EQ(prev, OracleMeasure(n));
    ASSERT_TRUE(n.Validate().empty());
    ReductionTrace again;
    GameTree n2 = Normalize(n, {}, &again);
    ASSERT_TRUE(again.steps.empty()) << "tree " << i << " not idempotent";
    ASSERT_TRUE(n2 == n);
  }
}

// Full trees only: sites touching a truncation frontier are skipped, and
// then which reduction fires first can matter.
bool Irreducible(const GameTree& t) {
  for (ReductionKind k : {ReductionKind::kMatrixRedundancy, ReductionKind::kBookkeeping,
                          ReductionKind::kSinglePlayer, ReductionKind::kSymmetry}) {
    if (!FindSites(t, k).empty()) return false;
  }
  return true;
}

// Every order ends in a normal form. Orders need not agree: a forced node
// above a chance node can be folded into a single-player sequence or turned
// into a chance node first, and the two results are both irreducible. The
// rate is reported and bounded; the corpus check lives in reduce_test.
TEST(ReductionPropertyTest, ShuffledOrdersReachNormalForms) {
  Engine rng(4);
  RandomTreeOptions full;
  full.allow_truncated = false;
  int split = 0;
  for (int i = 0; i < kTrees; ++i) {
    GameTree t = RandomTree(rng, full);
    GameTree base = Normalize(t);
    ASSERT_TRUE(Irreducible(base)) << "tree " << i;
    bool agree = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      NormalizeOptions opt;
      opt.shuffle_seed = seed;
      GameTree other = Normalize(t, opt);
      ASSERT_TRUE(Irreducible(other)) << "tree " << i << " seed " << seed;
      ASSERT_TRUE(other.Validate().empty()) << "tree " << i;
      agree = agree && RelabelingEquivalent(base, other, PinOptions::PlayersAndOutcomes());
    }
    split += !agree;
  }
  std::cout << "order-dependent normal forms: " << split << " of " << kTrees << " trees\n";
  EXPECT_LT(split, kTrees / 20);
}

TEST(ReductionPropertyTest, OrderSplitFixtureHasTwoNormalForms) {
  GameTree t = TreeFixture("order_split.json");
  GameTree base = Normalize(t);
  int distinct = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    NormalizeOptions opt;
    opt.shuffle_seed = seed;
    GameTree other = Normalize(t, opt);
    EXPECT_TRUE(Irreducible(other));
    distinct += !RelabelingEquivalent(base, other, PinOptions::PlayersAndOutcomes());
  }
  EXPECT_TRUE(Irreducible(base));
  EXPECT_GT(distinct, 0);
}

TEST(CanonicalPropertyTest, KeyEqualityMatchesWitnessSearchAndBruteForce) {
  Engine rng(5);
  int equal = 0, different = 0;
  for (int i = 0; i < kTrees; ++i) {
    GameTree a = RandomTree(rng);
    for (const PinOptions& pins : {PinOptions::None(), PinOptions::PlayersAndOutcomes()}) {
      GameTree b;
      switch (Below(rng, 4)) {
        case 0: b = RandomRelabel(a, rng, pins); break;
        case 1: b = Mutate(RandomRelabel(a, rng, pins), rng); break;
        case 2: b = Mutate(a, rng); break;
        default: b = RandomTree(rng); break;
      }
      bool keys = CanonicalForm(a, pins) == CanonicalForm(b, pins);
      std::optional<Witness> w = FindRelabelingWitness(a, b, pins);
      ASSERT_EQ(keys, w.has_value()) << "tree " << i;
      if (w) {
        std::vector<std::string> bad = VerifyWitness({a}, {b}, *w, pins);
        ASSERT_TRUE(bad.empty()) << bad.front();
      }
      ASSERT_EQ(BruteForceEquivalent(a, b, pins), w.has_value()) << "tree " << i;
      (keys ? equal : different)++;
    }
  }
  EXPECT_GT(equal, 300);
  EXPECT_GT(different, 300);
}

TEST(CanonicalPropertyTest, RelabelingIsAlwaysEquivalent) {
  Engine rng(6);
  for (int i = 0; i < kTrees; ++i) {
    GameTree a = RandomTree(rng);
    GameTree b = RandomRelabel(a, rng);
    ASSERT_EQ(CanonicalForm(a), CanonicalForm(b));
    ASSERT_TRUE(AgencyEquivalence(a, b).equivalent()) << "tree " << i;
  }
}

}  // namespace
}  // namespace ludeq::testing
