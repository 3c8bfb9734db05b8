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


#ifndef LUDEQ_SIMILARITY_H_
#define LUDEQ_SIMILARITY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ludeq/canonical.h"
#include "ludeq/completeness.h"
#include "ludeq/game_system.h"

namespace ludeq {

// A track/value bijection from one system's state space onto another's,
// with optional player and outcome bijections used as pins.
class StateMap {
 public:
  // Parses {tracks:{src:dst}, values:{src_track:{v:v'}}, players?, outcomes?}.
  // Tracks absent from "tracks" map to the same-named track; values absent
  // from a track's table map to the same-named value. Throws ValidationError
  // unless the result is a bijection between the two declarations.
  static StateMap FromJson(const std::string& text, const GameSystem& from,
                           const GameSystem& to);
  // Name-preserving map; throws ValidationError if the declarations differ.
  static StateMap Identity(const GameSystem& from, const GameSystem& to);
  static StateMap Identity(const GameSystem& sys) { return Identity(sys, sys); }

  GameState Apply(const GameState& state) const;
  StateMap Inverse() const;
  // this, then next.
  StateMap Then(const StateMap& next) const;

  // Pins induced by the optional player/outcome tables.
  PinOptions Pins() const;

  std::string ToJson(int indent = 2) const;

  TrackId track_image(TrackId t) const { return track_[t]; }
  ValueId value_image(TrackId t, ValueId v) const { return value_[t][v]; }
  const std::optional<std::map<std::string, std::string>>& players() const {
    return players_;
  }
  const std::optional<std::map<std::string, std::string>>& outcomes() const {
    return outcomes_;
  }

  bool operator==(const StateMap&) const = default;

 private:
  std::vector<TrackSpec> from_, to_;
  std::vector<TrackId> track_;
  std::vector<std::vector<ValueId>> value_;
  std::optional<std::map<std::string, std::string>> players_;
  std::optional<std::map<std::string, std::string>> outcomes_;
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

struct Interval {
  double level = 0.95;
  double low = 0;
  double high = 1;
};

// Wilson score interval for `successes` out of `n` trials; n > 0.
Interval WilsonInterval(std::uint64_t successes, std::uint64_t n,
                        double z = kWilsonZ95, double level = 0.95);

struct SimilarityOptions {
  std::uint64_t samples = 500;
  int depth = 2;
  std::uint64_t seed = 0;
  Scope scope = Scope::kAllStates;
  // Visit every state of the scope once instead of sampling.
  bool exhaustive = false;
  bool keep_records = true;
};

struct SampleRecord {
  std::string state;
  std::string mapped;
  bool match = false;
  // The partial tree could not be built (e.g. no consequence rule).
  bool error = false;
  std::string message;
};

struct SimilarityReport {
  double estimate = 0;
  std::uint64_t samples = 0;
  std::uint64_t matches = 0;
  std::uint64_t errors = 0;
  Interval interval;
  int depth = 0;
  std::uint64_t seed = 0;
  Scope scope = Scope::kAllStates;
  bool exhaustive = false;
  std::vector<SampleRecord> records;

  std::string ToJson(int indent = 2) const;
  std::string Summary() const;
};

// The states a run evaluates, in evaluation order.
std::vector<GameState> SimilarityStates(const GameSystem& sys,
                                        const SimilarityOptions& options);

// 1 if the depth-limited normalized trees at s and psi(s) are agency
// equivalent under psi's pins. Build failures propagate.
bool SampleMatches(const GameSystem& a, const GameSystem& b,
                   const StateMap& psi, const GameState& s, int depth);

SimilarityReport Similarity(const GameSystem& a, const GameSystem& b,
                            const StateMap& psi,
                            const SimilarityOptions& options = {});

}  // namespace ludeq

#endif  // LUDEQ_SIMILARITY_H_
