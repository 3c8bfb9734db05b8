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


#include <benchmark/benchmark.h>

#include <string>

#include "ludeq/canonical.h"
#include "ludeq/dsl.h"
#include "ludeq/equivalence.h"
#include "ludeq/reduce.h"
#include "ludeq/similarity.h"
#include "ludeq/tree_builder.h"

namespace {

using namespace ludeq;

const GameSystem& TicTacToe() {
  static const GameSystem sys = ParseFile(std::string(LUDEQ_FIXTURE_DIR) + "/tictactoe.game");
  return sys;
}

GameTree TicTacToeTree(int depth) {
  BuildOptions opt;
  if (depth >= 0) opt.depth = depth;
  return BuildForest(TicTacToe(), opt).front();
}

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ParseFile(std::string(LUDEQ_FIXTURE_DIR) + "/tictactoe.game"));
}
BENCHMARK(BM_Parse);

void BM_BuildDepth(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  std::size_t nodes = 0;
  for (auto _ : state) nodes = TicTacToeTree(depth).num_nodes();
  state.counters["nodes"] = static_cast<double>(nodes);
}
BENCHMARK(BM_BuildDepth)->Arg(2)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_BuildFull(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(TicTacToeTree(-1).num_nodes());
}
BENCHMARK(BM_BuildFull)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_CanonicalForm(benchmark::State& state) {
  GameTree t = TicTacToeTree(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(CanonicalForm(t));
  state.counters["nodes"] = static_cast<double>(t.num_nodes());
}
BENCHMARK(BM_CanonicalForm)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_Normalize(benchmark::State& state) {
  GameTree t = TicTacToeTree(static_cast<int>(state.range(0)));
  NormalizeOptions opt;
  opt.record_trace = false;
  std::size_t after = 0;
  for (auto _ : state) after = Normalize(t, opt).num_nodes();
  state.counters["nodes_before"] = static_cast<double>(t.num_nodes());
  state.counters["nodes_after"] = static_cast<double>(after);
}
BENCHMARK(BM_Normalize)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_SelfWitness(benchmark::State& state) {
  GameTree t = TicTacToeTree(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(FindRelabelingWitness(t, t));
}
BENCHMARK(BM_SelfWitness)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Similarity(benchmark::State& state) {
  const GameSystem& sys = TicTacToe();
  StateMap psi = StateMap::Identity(sys);
  SimilarityOptions opt;
  opt.samples = static_cast<std::uint64_t>(state.range(0));
  opt.keep_records = false;
  for (auto _ : state) benchmark::DoNotOptimize(Similarity(sys, sys, psi, opt).estimate);
}
BENCHMARK(BM_Similarity)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
