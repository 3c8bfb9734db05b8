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


#include "ludeq/similarity.h"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "ludeq/errors.h"
#include "ludeq/reduce.h"
#include "ludeq/rng.h"
#include "ludeq/tree_builder.h"

namespace ludeq {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using NameMap = std::map<std::string, std::string>;

int IndexOf(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

std::vector<std::string> TrackNames(const std::vector<TrackSpec>& tracks) {
  std::vector<std::string> out;
  for (const TrackSpec& t : tracks) out.push_back(t.name);
  return out;
}

const json& ObjectField(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_object()) throw ValidationError(std::string("state map: \"") + key + "\" must be an object");
  return v;
}

// Fills `image` (size n, -1 = unset) from explicit pairs, then defaults by
// name, and checks the result is a bijection onto `to`.
std::vector<int> NameBijection(const std::string& what, const std::vector<std::string>& from,
                               const std::vector<std::string>& to, const NameMap& pairs,
                               bool default_by_name) {
  std::vector<int> image(from.size(), -1);
  for (const auto& [src, dst] : pairs) {
    int i = IndexOf(from, src);
    if (i < 0) throw ValidationError("state map: unknown source " + what + " '" + src + "'");
    int j = IndexOf(to, dst);
    if (j < 0) throw ValidationError("state map: unknown target " + what + " '" + dst + "'");
    image[i] = j;
  }
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (image[i] >= 0) continue;
    int j = default_by_name ? IndexOf(to, from[i]) : -1;
    if (j < 0) throw ValidationError("state map: no image for " + what + " '" + from[i] + "'");
    image[i] = j;
  }
  if (from.size() != to.size())
    throw ValidationError("state map: " + what + " counts differ (" + std::to_string(from.size()) +
                          " vs " + std::to_string(to.size()) + ")");
  std::vector<bool> hit(to.size(), false);
  for (std::size_t i = 0; i < from.size(); ++i) {
    if (hit[image[i]])
      throw ValidationError("state map: " + what + " '" + to[image[i]] + "' is hit twice");
    hit[image[i]] = true;
  }
  return image;
}

NameMap ReadPairs(const json& obj, const char* what) {
  NameMap out;
  for (const auto& [k, v] : obj.items()) {
    if (!v.is_string())
      throw ValidationError(std::string("state map: ") + what + " entry '" + k + "' must be a string");
    out[k] = v.get<std::string>();
  }
  return out;
}

NameMap TotalMap(const std::string& what, const std::vector<std::string>& from,
                 const std::vector<std::string>& to, const NameMap& pairs) {
  std::vector<int> image = NameBijection(what, from, to, pairs, false);
  NameMap out;
  for (std::size_t i = 0; i < from.size(); ++i) out[from[i]] = to[image[i]];
  return out;
}

NameMap InvertMap(const NameMap& m) {
  NameMap out;
  for (const auto& [k, v] : m) out[v] = k;
  return out;
}

std::optional<NameMap> ComposeMaps(const std::optional<NameMap>& a, const std::optional<NameMap>& b) {
  if (!a || !b) return std::nullopt;
  NameMap out;
  for (const auto& [k, v] : *a) out[k] = b->at(v);
  return out;
}

}  // namespace

StateMap StateMap::FromJson(const std::string& text, const GameSystem& from, const GameSystem& to) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("state map: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("state map: top level must be an object");
  for (const auto& [k, v] : j.items()) {
    if (k != "tracks" && k != "values" && k != "players" && k != "outcomes")
      throw ValidationError("state map: unknown key '" + k + "'");
  }
  StateMap m;
  m.from_ = from.tracks;
  m.to_ = to.tracks;
  NameMap track_pairs;
  if (j.contains("tracks")) track_pairs = ReadPairs(ObjectField(j, "tracks"), "tracks");
  std::vector<int> timg = NameBijection("track", TrackNames(from.tracks), TrackNames(to.tracks),
                                        track_pairs, true);
  m.track_.assign(timg.begin(), timg.end());

  std::map<std::string, NameMap> value_pairs;
  if (j.contains("values")) {
    for (const auto& [track, obj] : ObjectField(j, "values").items()) {
      if (!from.FindTrack(track)) throw ValidationError("state map: unknown source track '" + track + "' in values");
      if (!obj.is_object()) throw ValidationError("state map: values of '" + track + "' must be an object");
      value_pairs[track] = ReadPairs(obj, "values");
    }
  }
  for (int t = 0; t < from.num_tracks(); ++t) {
    const TrackSpec& src = from.tracks[t];
    const TrackSpec& dst = to.tracks[m.track_[t]];
    auto it = value_pairs.find(src.name);
    std::vector<int> vimg = NameBijection("value of track " + src.name, src.values, dst.values,
                                          it == value_pairs.end() ? NameMap{} : it->second, true);
    m.value_.emplace_back(vimg.begin(), vimg.end());
  }
  if (j.contains("players"))
    m.players_ = TotalMap("player", from.players, to.players, ReadPairs(ObjectField(j, "players"), "players"));
  if (j.contains("outcomes"))
    m.outcomes_ = TotalMap("outcome", from.outcomes, to.outcomes, ReadPairs(ObjectField(j, "outcomes"), "outcomes"));
  return m;
}

StateMap StateMap::Identity(const GameSystem& from, const GameSystem& to) {
  if (TrackNames(from.tracks) != TrackNames(to.tracks))
    throw ValidationError("state map: the systems declare different tracks; supply a map file (--map)");
  return FromJson("{}", from, to);
}

GameState StateMap::Apply(const GameState& state) const {
  GameState out;
  out.values.resize(state.values.size());
  for (std::size_t t = 0; t < state.values.size(); ++t)
    out.values[track_[t]] = value_[t][state.values[t]];
  return out;
}

StateMap StateMap::Inverse() const {
  StateMap m;
  m.from_ = to_;
  m.to_ = from_;
  m.track_.assign(track_.size(), 0);
  m.value_.resize(track_.size());
  for (std::size_t t = 0; t < track_.size(); ++t) {
    TrackId d = track_[t];
    m.track_[d] = static_cast<TrackId>(t);
    m.value_[d].assign(value_[t].size(), 0);
    for (std::size_t v = 0; v < value_[t].size(); ++v) m.value_[d][value_[t][v]] = static_cast<ValueId>(v);
  }
  if (players_) m.players_ = InvertMap(*players_);
  if (outcomes_) m.outcomes_ = InvertMap(*outcomes_);
  return m;
}

// A player or outcome table survives only when both maps carry one.
StateMap StateMap::Then(const StateMap& next) const {
  if (to_ != next.from_) throw PreconditionError("state map: composition across different systems");
  StateMap m;
  m.from_ = from_;
  m.to_ = next.to_;
  for (std::size_t t = 0; t < track_.size(); ++t) {
    m.track_.push_back(next.track_[track_[t]]);
    std::vector<ValueId> vals;
    for (ValueId v : value_[t]) vals.push_back(next.value_[track_[t]][v]);
    m.value_.push_back(std::move(vals));
  }
  m.players_ = ComposeMaps(players_, next.players_);
  m.outcomes_ = ComposeMaps(outcomes_, next.outcomes_);
  return m;
}

PinOptions StateMap::Pins() const {
  PinOptions pins;
  if (players_) {
    pins.players = true;
    pins.player_map = players_;
  }
  if (outcomes_) {
    pins.outcomes = true;
    pins.outcome_map = outcomes_;
  }
  return pins;
}

std::string StateMap::ToJson(int indent) const {
  ordered_json j;
  j["tracks"] = ordered_json::object();
  j["values"] = ordered_json::object();
  for (std::size_t t = 0; t < track_.size(); ++t) {
    const TrackSpec& dst = to_[track_[t]];
    j["tracks"][from_[t].name] = dst.name;
    ordered_json vals = ordered_json::object();
    for (std::size_t v = 0; v < value_[t].size(); ++v) vals[from_[t].values[v]] = dst.values[value_[t][v]];
    j["values"][from_[t].name] = vals;
  }
  if (players_) j["players"] = *players_;
  if (outcomes_) j["outcomes"] = *outcomes_;
  return j.dump(indent);
}

Interval WilsonInterval(std::uint64_t successes, std::uint64_t n, double z, double level) {
  if (n == 0) throw PreconditionError("Wilson interval of zero trials");
  if (successes > n) throw PreconditionError("more successes than trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  Interval ci;
  ci.level = level;
  ci.low = successes == 0 ? 0.0 : std::max(0.0, center - half);
  ci.high = successes == n ? 1.0 : std::min(1.0, center + half);
  return ci;
}

std::vector<GameState> SimilarityStates(const GameSystem& sys, const SimilarityOptions& options) {
  std::vector<GameState> out;
  if (options.exhaustive) {
    if (options.scope == Scope::kReachable) {
      out = ReachableStates(sys);
      std::sort(out.begin(), out.end());
    } else {
      ForEachState(sys, [&](const GameState& s) {
        out.push_back(s);
        return true;
      });
    }
    return out;
  }
  if (options.samples == 0) throw PreconditionError("similarity needs at least one sample");
  Rng rng(options.seed);
  if (options.scope == Scope::kReachable) {
    std::vector<GameState> pool = ReachableStates(sys);
    std::sort(pool.begin(), pool.end());
    if (pool.empty()) throw PreconditionError("no reachable states to sample");
    for (std::uint64_t i = 0; i < options.samples; ++i) out.push_back(pool[rng.UniformBelow(pool.size())]);
    return out;
  }
  for (std::uint64_t i = 0; i < options.samples; ++i) {
    GameState s;
    for (const TrackSpec& t : sys.tracks) s.values.push_back(static_cast<ValueId>(rng.UniformBelow(t.values.size())));
    out.push_back(std::move(s));
  }
  return out;
}

bool SampleMatches(const GameSystem& a, const GameSystem& b, const StateMap& psi, const GameState& s,
                   int depth) {
  BuildOptions opt;
  opt.depth = depth;
  GameTree ta = BuildTree(a, s, opt);
  GameTree tb = BuildTree(b, psi.Apply(s), opt);
  return AgencyEquivalence(ta, tb, psi.Pins()).equivalent();
}

SimilarityReport Similarity(const GameSystem& a, const GameSystem& b, const StateMap& psi,
                            const SimilarityOptions& options) {
  if (options.depth < 0) throw PreconditionError("similarity depth must be non-negative");
  std::vector<GameState> states = SimilarityStates(a, options);
  if (states.empty()) throw PreconditionError("similarity has no states to evaluate");
  SimilarityReport r;
  r.depth = options.depth;
  r.seed = options.seed;
  r.scope = options.scope;
  r.exhaustive = options.exhaustive;
  r.samples = states.size();
  // Duplicate draws share one evaluation.
  std::map<GameState, SampleRecord> memo;
  for (const GameState& s : states) {
    auto it = memo.find(s);
    if (it == memo.end()) {
      SampleRecord rec;
      rec.state = FormatState(a, s);
      rec.mapped = FormatState(b, psi.Apply(s));
      try {
        rec.match = SampleMatches(a, b, psi, s, options.depth);
      } catch (const IncompleteSystemError& e) {
        rec.error = true;
        rec.message = e.what();
      } catch (const BudgetExceededError& e) {
        rec.error = true;
        rec.message = e.what();
      }
      it = memo.emplace(s, std::move(rec)).first;
    }
    if (it->second.match) ++r.matches;
    if (it->second.error) ++r.errors;
    if (options.keep_records) r.records.push_back(it->second);
  }
  r.estimate = static_cast<double>(r.matches) / static_cast<double>(r.samples);
  r.interval = WilsonInterval(r.matches, r.samples);
  return r;
}

std::string SimilarityReport::ToJson(int indent) const {
  ordered_json j;
  j["estimate"] = estimate;
  j["samples"] = samples;
  j["matches"] = matches;
  j["errors"] = errors;
  j["interval"] = {{"level", interval.level}, {"low", interval.low}, {"high", interval.high}};
  j["parameters"] = {{"depth", depth}, {"seed", seed}, {"scope", ScopeName(scope)}, {"exhaustive", exhaustive}};
  if (!records.empty()) {
    ordered_json recs = ordered_json::array();
    for (const SampleRecord& rec : records) {
      ordered_json o;
      o["state"] = rec.state;
      o["mapped"] = rec.mapped;
      o["match"] = rec.match;
      if (rec.error) {
        o["error"] = true;
        o["message"] = rec.message;
      }
      recs.push_back(std::move(o));
    }
    j["records"] = std::move(recs);
  }
  return j.dump(indent);
}

std::string SimilarityReport::Summary() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "similarity %.6f (%llu/%llu matches, %llu build errors)\n"
                "%.0f%% Wilson interval [%.6f, %.6f]\n"
                "depth %d, scope %s, %s\n",
                estimate, static_cast<unsigned long long>(matches), static_cast<unsigned long long>(samples),
                static_cast<unsigned long long>(errors), interval.level * 100, interval.low, interval.high, depth,
                ScopeName(scope),
                exhaustive ? "exhaustive" : ("seed " + std::to_string(seed)).c_str());
  return buf;
}

}  // namespace ludeq
