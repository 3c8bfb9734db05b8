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


#include "cli.h"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "ludeq/canonical.h"
#include "ludeq/completeness.h"
#include "ludeq/dsl.h"
#include "ludeq/equivalence.h"
#include "ludeq/errors.h"
#include "ludeq/gameplay.h"
#include "ludeq/reduce.h"
#include "ludeq/similarity.h"
#include "ludeq/tree_builder.h"
#include "ludeq/tree_io.h"

namespace ludeq::cli {
namespace {

using nlohmann::ordered_json;

// Input problems the library does not see (unreadable files, bad flags).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw InputError("cannot write '" + path + "'");
  outf << text;
  if (!text.empty() && text.back() != '\n') outf << '\n';
}

bool IsTreeFile(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

GameSystem LoadSystem(const std::string& path) {
  if (IsTreeFile(path)) throw InputError("'" + path + "' is a tree document; this command needs a .game file");
  return Parse(ReadFile(path), path);
}

Forest LoadForest(const std::string& path, std::optional<int> depth) {
  if (IsTreeFile(path)) {
    if (depth) throw InputError("--depth applies to .game inputs only");
    return ImportForestJson(ReadFile(path));
  }
  BuildOptions opt;
  opt.depth = depth;
  return BuildForest(LoadSystem(path), opt);
}

struct Style {
  bool color = false;
  std::string Paint(const std::string& text, const char* code) const {
    return color ? std::string("\033[") + code + "m" + text + "\033[0m" : text;
  }
  std::string Good(const std::string& t) const { return Paint(t, "32"); }
  std::string Bad(const std::string& t) const { return Paint(t, "31"); }
};

PinOptions ParsePins(const std::string& text) {
  PinOptions pins;
  if (text.empty() || text == "none") return pins;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "players") pins.players = true;
    else if (item == "outcomes") pins.outcomes = true;
    else if (item == "states") pins.states = true;
    else throw InputError("--pin takes a comma list of players, outcomes, states (or none); got '" + item + "'");
  }
  return pins;
}

ordered_json PinsJson(const PinOptions& p) {
  ordered_json j = ordered_json::array();
  if (p.players) j.push_back("players");
  if (p.outcomes) j.push_back("outcomes");
  if (p.states) j.push_back("states");
  return j;
}

// ---- validate ----

struct ValidateArgs {
  std::string file;
  std::string scope = "reachable";
  bool strict = false;
  bool json = false;
};

ordered_json ViolationJson(const Violation& v) {
  ordered_json j;
  j["kind"] = ViolationKindName(v.kind);
  if (!v.state.empty()) j["state"] = v.state;
  if (!v.tuple.empty()) j["tuple"] = v.tuple;
  j["message"] = v.message;
  return j;
}

int RunValidate(const ValidateArgs& a, std::ostream& out, const Style& style) {
  if (IsTreeFile(a.file)) throw InputError("validate needs a .game file");
  SourceFile src = ParseSource(ReadFile(a.file), a.file);
  CompletenessOptions opt;
  opt.strict = a.strict;
  CompletenessReport r = CheckCompleteness(src.system, ParseScope(a.scope), opt);
  if (a.json) {
    ordered_json j;
    j["file"] = a.file;
    j["complete"] = r.complete();
    j["scope"] = ScopeName(r.scope);
    j["states_checked"] = r.states_checked;
    j["terminal_states"] = r.terminal_states;
    j["tuples_checked"] = r.tuples_checked;
    j["violations"] = ordered_json::array();
    for (const Violation& v : r.violations) j["violations"].push_back(ViolationJson(v));
    j["warnings"] = ordered_json::array();
    for (const Violation& v : r.warnings) j["warnings"].push_back(ViolationJson(v));
    for (const Diagnostic& d : src.warnings) j["warnings"].push_back({{"kind", "source"}, {"message", d.Format()}});
    if (r.truncated) j["truncated"] = true;
    out << j.dump(2) << "\n";
  } else {
    for (const Diagnostic& d : src.warnings) out << d.Format() << "\n";
    for (const Violation& v : r.warnings) out << "warning: " << v.message << "\n";
    for (const Violation& v : r.violations) {
      out << ViolationKindName(v.kind) << ": " << v.message;
      if (!v.state.empty()) out << "\n  state: " << v.state;
      if (!v.tuple.empty()) out << "\n  tuple: " << v.tuple;
      out << "\n";
    }
    if (r.complete()) {
      out << style.Good("complete") << " (" << r.states_checked << " states, " << r.terminal_states
          << " terminal, " << r.tuples_checked << " tuples, scope " << ScopeName(r.scope) << ")\n";
    } else {
      out << style.Bad("incomplete") << ": " << r.violations.size() << (r.truncated ? "+" : "")
          << " violation(s) over " << r.states_checked << " states, scope " << ScopeName(r.scope) << "\n";
    }
  }
  return r.complete() ? kOk : kNegative;
}

// ---- play ----

struct PlayArgs {
  std::string file;
  std::uint64_t seed = 0;
  std::string policy = "uniform";
  std::string start;
  std::size_t max_steps = 1'000'000;
  bool json = false;
};

int RunPlay(const PlayArgs& a, std::ostream& out) {
  GameSystem sys = LoadSystem(a.file);
  Policy policy;
  if (a.policy == "uniform") policy = UniformPolicy();
  else if (a.policy == "first") policy = FirstLegalPolicy();
  else throw InputError("--policy must be 'uniform' or 'first'");
  GameState s0;
  if (!a.start.empty()) {
    s0 = ParseState(sys, a.start);
  } else {
    std::vector<GameState> init = InitialStates(sys);
    if (init.empty()) throw InputError("the system has no initial state");
    s0 = init.front();
  }
  Playthrough p = Play(sys, s0, policy, a.seed, a.max_steps);
  if (a.json) {
    ordered_json j;
    j["initial"] = FormatState(sys, s0);
    j["steps"] = ordered_json::array();
    for (const PlayStep& st : p.steps) {
      const Consequence& c = Consequences(sys, st.tuple, st.state)[st.consequence];
      j["steps"].push_back({{"state", FormatState(sys, st.state)},
                            {"tuple", FormatTuple(sys, st.tuple)},
                            {"consequence", st.consequence},
                            {"prob", c.probability.ToString()},
                            {"actions", FormatActions(sys, c.actions)},
                            {"successor", FormatState(sys, st.successor)}});
    }
    j["final"] = FormatState(sys, p.final_state);
    j["outcome"] = sys.outcomes[p.outcome];
    out << j.dump(2) << "\n";
  } else {
    out << "start   " << FormatState(sys, s0) << "\n";
    int k = 0;
    for (const PlayStep& st : p.steps) {
      const Consequence& c = Consequences(sys, st.tuple, st.state)[st.consequence];
      out << "step " << ++k << "  " << FormatTuple(sys, st.tuple) << "  [" << c.probability.ToString() << "] "
          << FormatActions(sys, c.actions) << "\n        -> " << FormatState(sys, st.successor) << "\n";
    }
    out << "outcome " << sys.outcomes[p.outcome] << "\n";
  }
  return kOk;
}

// ---- tree ----

struct TreeArgs {
  std::string file;
  std::string root;
  std::optional<int> depth;
  std::string format = "json";
  std::string out_path;
  bool stats = false;
  bool json = false;
};

void AddStats(TreeStats& total, const TreeStats& s) {
  total.nodes += s.nodes;
  total.state_nodes += s.state_nodes;
  total.chance_nodes += s.chance_nodes;
  total.terminal_nodes += s.terminal_nodes;
  total.truncated_nodes += s.truncated_nodes;
  total.decision_edges += s.decision_edges;
  total.chance_edges += s.chance_edges;
  total.max_depth = std::max(total.max_depth, s.max_depth);
  if (total.outcome_counts.size() < s.outcome_counts.size()) total.outcome_counts.resize(s.outcome_counts.size());
  for (std::size_t i = 0; i < s.outcome_counts.size(); ++i) total.outcome_counts[i] += s.outcome_counts[i];
}

int RunTree(const TreeArgs& a, std::ostream& out) {
  if (a.format != "json" && a.format != "dot") throw InputError("--format must be 'json' or 'dot'");
  if (a.depth && *a.depth < 0) throw InputError("--depth must be non-negative");
  Forest forest;
  if (!a.root.empty()) {
    GameSystem sys = LoadSystem(a.file);
    BuildOptions opt;
    opt.depth = a.depth;
    forest.push_back(BuildTree(sys, ParseState(sys, a.root), opt));
  } else {
    forest = LoadForest(a.file, a.depth);
  }
  if (a.stats) {
    TreeStats total;
    for (const GameTree& t : forest) AddStats(total, ComputeStats(t));
    const std::vector<std::string>& names = forest.front().outcomes();
    if (a.json) {
      ordered_json j;
      j["trees"] = forest.size();
      j["nodes"] = total.nodes;
      j["state_nodes"] = total.state_nodes;
      j["chance_nodes"] = total.chance_nodes;
      j["terminal_nodes"] = total.terminal_nodes;
      j["truncated_nodes"] = total.truncated_nodes;
      j["decision_edges"] = total.decision_edges;
      j["chance_edges"] = total.chance_edges;
      j["max_depth"] = total.max_depth;
      j["outcomes"] = ordered_json::object();
      for (std::size_t i = 0; i < total.outcome_counts.size() && i < names.size(); ++i)
        j["outcomes"][names[i]] = total.outcome_counts[i];
      out << j.dump(2) << "\n";
    } else {
      out << "trees           " << forest.size() << "\n"
          << "nodes           " << total.nodes << "\n"
          << "state nodes     " << total.state_nodes << "\n"
          << "chance nodes    " << total.chance_nodes << "\n"
          << "leaves          " << total.terminal_nodes << "\n"
          << "truncated       " << total.truncated_nodes << "\n"
          << "decision edges  " << total.decision_edges << "\n"
          << "chance edges    " << total.chance_edges << "\n"
          << "max depth       " << total.max_depth << "\n";
      for (std::size_t i = 0; i < total.outcome_counts.size() && i < names.size(); ++i)
        out << "  " << names[i] << ": " << total.outcome_counts[i] << "\n";
    }
    if (a.out_path.empty()) return kOk;
  }
  std::string text;
  if (a.format == "dot") {
    for (std::size_t i = 0; i < forest.size(); ++i) {
      DotOptions d;
      if (forest.size() > 1) d.graph_name = "game_tree_" + std::to_string(i);
      text += ExportDot(forest[i], d);
    }
  } else {
    text = forest.size() == 1 ? ExportJson(forest.front(), 2) : ExportForestJson(forest, 2);
    text += "\n";
  }
  if (a.out_path.empty()) out << text;
  else WriteFile(a.out_path, text);
  return kOk;
}

// ---- reduce ----

struct ReduceArgs {
  std::string file;
  std::optional<int> depth;
  std::optional<std::uint64_t> shuffle;
  std::string out_path;
  bool trace = false;
};

int RunReduce(const ReduceArgs& a, std::ostream& out) {
  Forest forest = LoadForest(a.file, a.depth);
  NormalizeOptions opt;
  opt.shuffle_seed = a.shuffle;
  std::vector<ReductionTrace> traces;
  Forest normal = Normalize(forest, opt, &traces);
  std::string tree_text = normal.size() == 1 ? ExportJson(normal.front(), 2) : ExportForestJson(normal, 2);
  if (!a.trace) {
    if (a.out_path.empty()) out << tree_text << "\n";
    else WriteFile(a.out_path, tree_text);
    return kOk;
  }
  ordered_json trace_json;
  if (traces.size() == 1) {
    trace_json = ordered_json::parse(traces.front().ToJson());
  } else {
    trace_json = ordered_json::array();
    for (const ReductionTrace& t : traces) trace_json.push_back(ordered_json::parse(t.ToJson()));
  }
  if (!a.out_path.empty()) {
    WriteFile(a.out_path, tree_text);
    out << trace_json.dump(2) << "\n";
  } else {
    ordered_json j;
    j["tree"] = ordered_json::parse(tree_text);
    j["trace"] = std::move(trace_json);
    out << j.dump(2) << "\n";
  }
  return kOk;
}

// ---- equiv ----

struct EquivArgs {
  std::string a, b;
  std::string mode = "relabel";
  std::string pin = "none";
  std::optional<int> depth;
  bool witness = false;
  bool json = false;
};

int RunEquiv(const EquivArgs& args, std::ostream& out, const Style& style) {
  PinOptions pins = ParsePins(args.pin);
  if (args.mode != "structural" && args.mode != "relabel" && args.mode != "agency")
    throw InputError("--mode must be structural, relabel or agency");
  Forest a = LoadForest(args.a, args.depth);
  Forest b = LoadForest(args.b, args.depth);
  bool equivalent = false;
  std::optional<Witness> w;
  Forest wa, wb;  // the forests the witness relates
  if (args.mode == "structural") {
    equivalent = StructurallyEquivalent(a, b);
  } else if (args.mode == "relabel") {
    w = FindRelabelingWitness(a, b, pins);
    wa = std::move(a);
    wb = std::move(b);
    equivalent = w.has_value();
  } else {
    AgencyResult r = AgencyEquivalence(a, b, pins);
    w = std::move(r.witness);
    wa = std::move(r.normal_a);
    wb = std::move(r.normal_b);
    equivalent = w.has_value();
  }
  if (w) {
    std::vector<std::string> problems = VerifyWitness(wa, wb, *w, pins);
    if (!problems.empty()) throw Error("internal: witness failed verification: " + problems.front());
  }
  if (args.json) {
    ordered_json j;
    j["equivalent"] = equivalent;
    j["mode"] = args.mode;
    j["pins"] = PinsJson(pins);
    if (args.witness && w) j["witness"] = ordered_json::parse(WitnessToJson(*w, wa, wb));
    out << j.dump(2) << "\n";
  } else {
    out << (equivalent ? style.Good("equivalent") : style.Bad("not equivalent")) << " (" << args.mode;
    if (args.mode != "structural" && (pins.players || pins.outcomes || pins.states))
      out << ", pinned " << PinsJson(pins).dump();
    out << ")\n";
    if (args.witness && w) out << WitnessToJson(*w, wa, wb, 2) << "\n";
  }
  return equivalent ? kOk : kNegative;
}

// ---- sim ----

struct SimArgs {
  std::string a, b;
  std::string map;
  std::uint64_t samples = 500;
  int depth = 2;
  std::uint64_t seed = 0;
  std::string scope = "all";
  bool exhaustive = false;
  bool records = false;
  std::optional<double> threshold;
  bool json = false;
};

int RunSim(const SimArgs& args, std::ostream& out) {
  GameSystem a = LoadSystem(args.a);
  GameSystem b = LoadSystem(args.b);
  StateMap psi = args.map.empty() ? StateMap::Identity(a, b) : StateMap::FromJson(ReadFile(args.map), a, b);
  SimilarityOptions opt;
  opt.samples = args.samples;
  opt.depth = args.depth;
  opt.seed = args.seed;
  opt.scope = ParseScope(args.scope);
  opt.exhaustive = args.exhaustive;
  opt.keep_records = args.records;
  if (!opt.exhaustive && opt.samples == 0) throw InputError("--samples must be positive");
  SimilarityReport r = Similarity(a, b, psi, opt);
  if (args.json) out << r.ToJson(2) << "\n";
  else out << r.Summary();
  if (args.threshold && r.estimate < *args.threshold) return kNegative;
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const Environment& env) {
  CLI::App app{"Game systems: trees, normal forms, equivalence and similarity", "ludeq"};
  app.require_subcommand(1);
  std::string color = "auto";
  app.add_option("--color", color, "auto, always or never (auto honours NO_COLOR)")
      ->check(CLI::IsMember({"auto", "always", "never"}));

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Check a game system for completeness (exit 1 on violations)");
  validate->add_option("file", va.file, ".game file")->required();
  validate->add_option("--scope", va.scope, "all or reachable")->check(CLI::IsMember({"all", "reachable"}));
  validate->add_flag("--strict", va.strict, "Warn about overlapping consequence rules");
  validate->add_flag("--json", va.json, "JSON report");

  PlayArgs pa;
  auto* play = app.add_subcommand("play", "Run one seeded playthrough");
  play->add_option("file", pa.file, ".game file")->required();
  play->add_option("--seed", pa.seed, "RNG seed");
  play->add_option("--policy", pa.policy, "uniform or first")->check(CLI::IsMember({"uniform", "first"}));
  play->add_option("--start", pa.start, "Initial state literal (default: first initial state)");
  play->add_option("--max-steps", pa.max_steps, "Step limit");
  play->add_flag("--json", pa.json, "JSON transcript");

  TreeArgs ta;
  auto* tree = app.add_subcommand("tree", "Build a game tree");
  tree->add_option("file", ta.file, ".game file or tree JSON")->required();
  tree->add_option("--root", ta.root, "Root state literal, e.g. 'turn=X, c1=-, ...'");
  tree->add_option("--depth", ta.depth, "Expand generations 0..N; deeper nodes are truncated");
  tree->add_option("--format", ta.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  tree->add_option("--out", ta.out_path, "Write the tree here instead of stdout");
  tree->add_flag("--stats", ta.stats, "Print node, leaf and chance counts");
  tree->add_flag("--json", ta.json, "Statistics as JSON");

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "Normalize a tree by agency-preserving reductions");
  reduce->add_option("file", ra.file, ".game file or tree JSON")->required();
  reduce->add_option("--depth", ra.depth, "Build depth for .game inputs");
  reduce->add_option("--shuffle", ra.shuffle, "Randomize reduction order with this seed");
  reduce->add_option("--out", ra.out_path, "Write the normal form here");
  reduce->add_flag("--trace", ra.trace, "Emit the applied reduction sites");

  EquivArgs ea;
  auto* equiv = app.add_subcommand("equiv", "Decide equivalence (exit 0 equivalent, 1 not)");
  equiv->add_option("a", ea.a, "First .game file or tree JSON")->required();
  equiv->add_option("b", ea.b, "Second .game file or tree JSON")->required();
  equiv->add_option("--mode", ea.mode, "structural, relabel or agency")
      ->check(CLI::IsMember({"structural", "relabel", "agency"}));
  equiv->add_option("--pin", ea.pin, "Comma list of players, outcomes, states, or none");
  equiv->add_option("--depth", ea.depth, "Build depth for .game inputs");
  equiv->add_flag("--witness", ea.witness, "Print the verified witness");
  equiv->add_flag("--json", ea.json, "JSON verdict");

  SimArgs sa;
  auto* sim = app.add_subcommand("sim", "Estimate similarity under a state map");
  sim->add_option("a", sa.a, "Source .game file")->required();
  sim->add_option("b", sa.b, "Target .game file")->required();
  sim->add_option("--map", sa.map, "State map JSON (default: name-preserving)");
  sim->add_option("--samples", sa.samples, "Number of sampled states");
  sim->add_option("--depth", sa.depth, "Partial tree depth")->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", sa.seed, "RNG seed");
  sim->add_option("--scope", sa.scope, "all or reachable")->check(CLI::IsMember({"all", "reachable"}));
  sim->add_flag("--exhaustive", sa.exhaustive, "Visit every state of the scope once");
  sim->add_flag("--records", sa.records, "Include per-sample records in the JSON report");
  sim->add_option("--threshold", sa.threshold, "Exit 1 when the estimate is below this");
  sim->add_flag("--json", sa.json, "JSON report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    for (const CLI::App* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << "run 'ludeq --help' for usage\n";
    return kInputError;
  }

  Style style;
  style.color = color == "always" || (color == "auto" && env.stdout_is_tty && !env.no_color);
  try {
    if (validate->parsed()) return RunValidate(va, out, style);
    if (play->parsed()) return RunPlay(pa, out);
    if (tree->parsed()) return RunTree(ta, out);
    if (reduce->parsed()) return RunReduce(ra, out);
    if (equiv->parsed()) return RunEquiv(ea, out, style);
    if (sim->parsed()) return RunSim(sa, out);
  } catch (const ParseError& e) {
    for (const Diagnostic& d : e.diagnostics()) err << d.Format() << "\n";
    return kInputError;
  } catch (const IncompleteSystemError& e) {
    err << "error: " << e.what() << "\n";
    if (!e.state().empty()) err << "  state: " << e.state() << "\n";
    if (!e.tuple().empty()) err << "  tuple: " << e.tuple() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace ludeq::cli
