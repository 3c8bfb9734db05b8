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

#include "ludeq/tree_io.h"

#include <map>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "ludeq/errors.h"

namespace ludeq {
namespace {

using json = nlohmann::json;

json SeqToJson(const GameTree& tree, const TupleSeq& seq) {
  json steps = json::array();
  const int n = tree.num_players();
  for (std::size_t k = 0; k + n <= seq.size(); k += n) {
    json tuple = json::array();
    for (int p = 0; p < n; ++p) {
      Symbol s = seq[k + p];
      if (s == kNullSymbol) {
        tuple.push_back(nullptr);
      } else {
        tuple.push_back(tree.symbols()[s]);
      }
    }
    steps.push_back(std::move(tuple));
  }
  return steps;
}

json TreeToJson(const GameTree& tree) {
  json doc;
  doc["players"] = tree.players();
  doc["outcomes"] = tree.outcomes();
  doc["decisions"] = tree.symbols();
  doc["root"] = tree.root();
  json nodes = json::array();
  for (std::size_t i = 0; i < tree.num_nodes(); ++i) {
    const auto& n = tree.node(static_cast<NodeId>(i));
    json node;
    node["id"] = i;
    node["kind"] = n.kind == NodeKind::kTruncated ? "state" : NodeKindName(n.kind);
    if (n.state >= 0) node["state"] = tree.state_labels()[n.state];
    if (n.outcome >= 0) node["outcome"] = tree.outcomes()[n.outcome];
    if (n.kind == NodeKind::kTruncated) node["truncated"] = true;
    nodes.push_back(std::move(node));
  }
  doc["nodes"] = std::move(nodes);
  json edges = json::array();
  for (std::size_t i = 0; i < tree.num_edges(); ++i) {
    const auto& e = tree.edge(static_cast<EdgeId>(i));
    json edge;
    edge["from"] = e.from;
    edge["to"] = e.to;
    if (e.kind == EdgeKind::kChance) {
      edge["kind"] = "chance";
      edge["prob"] = e.prob.ToString();
    } else {
      edge["kind"] = "decision";
      json tuples = json::array();
      for (const TupleSeq& seq : e.label) tuples.push_back(SeqToJson(tree, seq));
      edge["tuples"] = std::move(tuples);
    }
    edges.push_back(std::move(edge));
  }
  doc["edges"] = std::move(edges);
  return doc;
}

std::string IdText(const json& id) { return id.is_string() ? id.get<std::string>() : id.dump(); }

[[noreturn]] void Fail(const std::string& message) { throw TreeFormatError(message); }

const json& Require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) Fail(where + ": missing \"" + key + "\"");
  return *it;
}

std::string RequireString(const json& obj, const char* key, const std::string& where) {
  const json& v = Require(obj, key, where);
  if (!v.is_string()) Fail(where + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

GameTree TreeFromJson(const json& doc) {
  if (!doc.is_object()) Fail("tree document must be a JSON object");
  const json& players = Require(doc, "players", "tree");
  if (!players.is_array() || players.empty()) Fail("tree: \"players\" must be a nonempty array");
  std::vector<std::string> player_names;
  for (const json& p : players) {
    if (!p.is_string()) Fail("tree: player names must be strings");
    player_names.push_back(p.get<std::string>());
  }
  std::vector<std::string> outcomes, decisions;
  for (auto [key, out] : {std::pair{"outcomes", &outcomes}, std::pair{"decisions", &decisions}}) {
    auto it = doc.find(key);
    if (it == doc.end()) continue;
    if (!it->is_array()) Fail(std::string("tree: \"") + key + "\" must be an array");
    for (const json& v : *it) {
      if (!v.is_string()) Fail(std::string("tree: \"") + key + "\" entries must be strings");
      out->push_back(v.get<std::string>());
    }
  }
  GameTree tree(player_names, outcomes, decisions);
  const int np = static_cast<int>(player_names.size());

  const json& nodes = Require(doc, "nodes", "tree");
  if (!nodes.is_array() || nodes.empty()) Fail("tree: \"nodes\" must be a nonempty array");
  std::map<std::string, NodeId> ids;
  std::vector<std::string> names;
  std::map<std::string, std::int32_t> state_ids;
  for (const json& n : nodes) {
    if (!n.is_object()) Fail("tree: every node must be an object");
    const json& id = Require(n, "id", "node");
    if (!id.is_string() && !id.is_number_integer()) Fail("node: \"id\" must be an integer or string");
    std::string name = IdText(id);
    std::string where = "node " + name;
    if (ids.count(name)) Fail(where + ": duplicate id");
    std::string kind = RequireString(n, "kind", where);
    bool truncated = false;
    if (auto t = n.find("truncated"); t != n.end()) {
      if (!t->is_boolean()) Fail(where + ": \"truncated\" must be a boolean");
      truncated = t->get<bool>();
    }
    NodeKind k;
    if (kind == "state") {
      k = truncated ? NodeKind::kTruncated : NodeKind::kState;
    } else if (kind == "truncated") {
      k = NodeKind::kTruncated;
    } else if (kind == "chance") {
      k = NodeKind::kChance;
    } else if (kind == "terminal") {
      k = NodeKind::kTerminal;
    } else {
      Fail(where + ": unknown kind \"" + kind + "\"");
    }
    if (truncated && k != NodeKind::kTruncated) Fail(where + ": only state nodes can be truncated");
    std::int32_t state = -1;
    if (auto s = n.find("state"); s != n.end()) {
      if (!s->is_string()) Fail(where + ": \"state\" must be a string");
      if (k == NodeKind::kChance) Fail(where + ": chance nodes carry no state");
      auto [it, fresh] = state_ids.try_emplace(s->get<std::string>(), 0);
      if (fresh) it->second = tree.InternState(it->first);
      state = it->second;
    }
    std::int32_t outcome = -1;
    if (auto o = n.find("outcome"); o != n.end()) {
      if (!o->is_string()) Fail(where + ": \"outcome\" must be a string");
      if (k != NodeKind::kTerminal) Fail(where + ": only terminal nodes carry outcomes");
      outcome = tree.InternOutcome(o->get<std::string>());
    } else if (k == NodeKind::kTerminal) {
      Fail(where + ": terminal node without an outcome");
    }
    ids[name] = tree.AddNode(k, state, outcome);
    names.push_back(name);
  }
  auto lookup = [&](const json& edge, const char* key, const std::string& where) {
    const json& id = Require(edge, key, where);
    if (!id.is_string() && !id.is_number_integer()) Fail(where + ": bad node id");
    auto it = ids.find(IdText(id));
    if (it == ids.end()) Fail(where + ": unknown node " + IdText(id));
    return it->second;
  };

  const json& edges = Require(doc, "edges", "tree");
  if (!edges.is_array()) Fail("tree: \"edges\" must be an array");
  std::size_t index = 0;
  for (const json& e : edges) {
    std::string where = "edge " + std::to_string(index++);
    if (!e.is_object()) Fail(where + ": must be an object");
    NodeId from = lookup(e, "from", where);
    NodeId to = lookup(e, "to", where);
    where += " (" + names[from] + " -> " + names[to] + ")";
    if (tree.node(to).in_edge >= 0) Fail("node " + names[to] + ": more than one incoming edge");
    if (from == to) Fail("node " + names[to] + ": self loop");
    std::string kind = RequireString(e, "kind", where);
    if (kind == "chance") {
      std::string text = RequireString(e, "prob", where);
      Probability p;
      try {
        p = Probability::Parse(text);
      } catch (const std::exception&) {
        Fail(where + ": invalid probability \"" + text + "\"");
      }
      if (tree.node(from).kind != NodeKind::kChance) {
        Fail("node " + names[from] + ": chance edge out of a non-chance node");
      }
      tree.AddChanceEdge(from, to, p);
    } else if (kind == "decision") {
      if (tree.node(from).kind != NodeKind::kState) {
        Fail("node " + names[from] + ": decision edge out of a non-state node");
      }
      const json& tuples = Require(e, "tuples", where);
      if (!tuples.is_array()) Fail(where + ": \"tuples\" must be an array");
      EdgeLabel label;
      for (const json& seq : tuples) {
        if (!seq.is_array() || seq.empty()) Fail(where + ": each sequence must be a nonempty array");
        json steps = seq[0].is_array() ? seq : json::array({seq});
        TupleSeq flat;
        for (const json& tuple : steps) {
          if (!tuple.is_array() || static_cast<int>(tuple.size()) != np) {
            Fail(where + ": every tuple needs exactly " + std::to_string(np) + " entries");
          }
          for (const json& d : tuple) {
            if (d.is_null()) {
              flat.push_back(kNullSymbol);
            } else if (d.is_string()) {
              if (d.get<std::string>() == "0") {
                flat.push_back(kNullSymbol);
              } else {
                flat.push_back(tree.InternSymbol(d.get<std::string>()));
              }
            } else {
              Fail(where + ": decisions must be strings or null");
            }
          }
        }
        label.push_back(std::move(flat));
      }
      tree.AddDecisionEdge(from, to, std::move(label));
    } else {
      Fail(where + ": unknown edge kind \"" + kind + "\"");
    }
  }
  const json& root = Require(doc, "root", "tree");
  if (!root.is_string() && !root.is_number_integer()) Fail("tree: bad root id");
  auto rit = ids.find(IdText(root));
  if (rit == ids.end()) Fail("tree: unknown root " + IdText(root));
  tree.set_root(rit->second);

  auto problems = tree.Validate();
  if (!problems.empty()) {
    // Report with document ids rather than internal indices.
    static const std::regex kNode(R"(^node (\d+):)");
    std::smatch m;
    std::string first = problems.front();
    if (std::regex_search(first, m, kNode)) {
      first = "node " + names[std::stoul(m[1].str())] + ":" + m.suffix().str();
    }
    Fail(first);
  }
  return tree;
}

json Parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    Fail(std::string("malformed JSON: ") + e.what());
  }
}

std::string DotEscape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::string ExportJson(const GameTree& tree, int indent) { return TreeToJson(tree).dump(indent); }

std::string ExportForestJson(const Forest& forest, int indent) {
  json doc;
  doc["forest"] = json::array();
  for (const GameTree& t : forest) doc["forest"].push_back(TreeToJson(t));
  return doc.dump(indent);
}

GameTree ImportJson(const std::string& text) { return TreeFromJson(Parse(text)); }

Forest ImportForestJson(const std::string& text) {
  json doc = Parse(text);
  Forest forest;
  if (doc.is_object() && doc.contains("forest")) {
    const json& list = doc["forest"];
    if (!list.is_array() || list.empty()) Fail("\"forest\" must be a nonempty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      try {
        forest.push_back(TreeFromJson(list[i]));
      } catch (const TreeFormatError& e) {
        Fail("forest tree " + std::to_string(i) + ": " + e.what());
      }
    }
  } else {
    forest.push_back(TreeFromJson(doc));
  }
  return forest;
}

std::string ExportDot(const GameTree& tree, const DotOptions& options) {
  std::ostringstream os;
  os << "digraph " << options.graph_name << " {\n";
  os << "  node [fontname=\"Helvetica\", fontsize=10];\n";
  os << "  edge [fontname=\"Helvetica\", fontsize=9];\n";
  for (NodeId v : tree.Preorder()) {
    const auto& n = tree.node(v);
    std::string label;
    if (options.state_labels && n.state >= 0) label = tree.state_labels()[n.state];
    os << "  n" << v << " [";
    switch (n.kind) {
      case NodeKind::kState:
        os << "shape=ellipse";
        break;
      case NodeKind::kChance:
        os << "shape=circle, width=0.25, fixedsize=true";
        label.clear();
        break;
      case NodeKind::kTerminal:
        os << "shape=box, peripheries=2";
        label = tree.outcomes()[n.outcome] + (label.empty() ? "" : "\n" + label);
        break;
      case NodeKind::kTruncated:
        os << "shape=ellipse, style=dashed";
        break;
    }
    os << ", label=\"" << DotEscape(label) << "\"];\n";
    for (EdgeId e : n.children) {
      const auto& edge = tree.edge(e);
      os << "  n" << v << " -> n" << edge.to << " [label=\"";
      if (edge.kind == EdgeKind::kChance) {
        os << edge.prob.ToString() << "\", style=dashed";
      } else {
        std::string text;
        for (std::size_t i = 0; i < edge.label.size(); ++i) {
          if (i) text += "\n";
          text += tree.FormatSeq(edge.label[i]);
        }
        os << DotEscape(text) << "\"";
      }
      os << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace ludeq
