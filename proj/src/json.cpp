#include "logicbench/json.hpp"

#include "logicbench/error.hpp"
#include "logicbench/syntax.hpp"

namespace logicbench {

void schema_error(const std::string& path, const std::string& message) {
  throw Error("schema_violation", path + ": " + message, path);
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path + "." + key, "missing field");
  return *it;
}

std::string expect_string(const Json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

bool expect_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) schema_error(path, "expected a boolean");
  return j.get<bool>();
}

long long expect_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<long long>();
}

const Json& expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array");
  return j;
}

const Json& expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected an object");
  return j;
}

namespace {

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string field(const std::string& path, const std::string& key) { return path + "." + key; }

// Runs a text parser, turning its errors into schema violations at `path`.
template <class F>
auto parsed(const std::string& path, F&& parse) {
  try {
    return parse();
  } catch (const ParseError& e) {
    throw Error(e.code() == "wrong_logic" ? "wrong_logic" : "schema_violation",
                path + ": " + e.what(), path);
  } catch (const Error& e) {
    if (e.code() == "schema_violation") throw;
    throw Error("schema_violation", path + ": " + e.what(), path);
  }
}

Json encode_pair(const std::string& a, const std::string& b) { return Json::array({a, b}); }

std::pair<std::string, std::string> decode_pair(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected a pair");
  return {expect_string(j[0], at(path, 0)), expect_string(j[1], at(path, 1))};
}

Node decode_node(const Json& j, const std::string& path) { return static_cast<Node>(expect_int(j, path)); }

std::optional<int> optional_int(const Json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return static_cast<int>(expect_int(*it, field(path, key)));
}

Json optional_json(const std::optional<int>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json encode(const Formula& f) { return render(f); }
Json encode(const FoFormula& f) { return render(f); }
Json encode(const Clause& c) { return render(c); }

Json encode(const ClauseSet& s) {
  Json out = Json::array();
  for (const auto& c : s) out.push_back(render(c));
  return out;
}

Json encode(const Substitution& s) {
  Json out = Json::object();
  for (const auto& [v, t] : s) out[v] = render(t);
  return out;
}

Json encode(const Valuation& v) {
  Json out = Json::object();
  for (const auto& [a, b] : v) out[a] = b;
  return out;
}

Json encode(const KripkeStructure& k) {
  Json edges = Json::array();
  for (const auto& [a, b] : k.edges) edges.push_back(encode_pair(a, b));
  Json labels = Json::object();
  for (const auto& w : k.worlds) {
    auto it = k.labels.find(w);
    if (it == k.labels.end() || it->second.empty()) continue;
    labels[w] = Json(it->second);
  }
  return Json{{"worlds", k.worlds},
              {"edges", edges},
              {"labels", labels},
              {"designated", k.designated ? Json(*k.designated) : Json(nullptr)}};
}

Json encode(const ColoredGraph& g) {
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges) edges.push_back(Json::array({a, b}));
  Json colors = Json::object();
  for (const auto& [n, cs] : g.colors)
    if (!cs.empty()) colors[std::to_string(n)] = Json(cs);
  return Json{{"nodes", g.nodes}, {"edges", edges}, {"colors", colors}};
}

Json encode(const NodeSet& s) { return Json(s); }

Json encode(const TruthTable& t) {
  Json cols = Json::array();
  for (const auto& c : t.columns) cols.push_back(render(c));
  return Json{{"atoms", t.atoms}, {"columns", cols}, {"rows", t.rows}};
}

Json encode(const EvaluationTable& t) {
  Json rows = Json::array();
  for (const auto& f : t.formulas) rows.push_back(render(f));
  return Json{{"formulas", rows}, {"worlds", t.worlds}, {"cells", t.cells}};
}

Json encode(const StepVerdict& v) {
  Json out{{"accepted", v.accepted}};
  if (!v.accepted) out["reason"] = v.reason;
  out["message"] = v.message;
  if (!v.locus.empty()) out["locus"] = v.locus;
  return out;
}

Json encode(const EvalTrace& t) {
  Json out{{"formula", t.formula}};
  if (t.world) out["world"] = *t.world;
  out["value"] = t.value;
  if (!t.because.empty()) {
    Json kids = Json::array();
    for (const auto& c : t.because) kids.push_back(encode(c));
    out["because"] = kids;
  }
  return out;
}

Json encode(const ModelVerdict& v) { return Json{{"satisfies", v.satisfies}, {"trace", encode(v.trace)}}; }

Json encode(const Candidate& c) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Valuation>) return Json{{"kind", "valuation"}, {"value", encode(x)}};
        else if constexpr (std::is_same_v<T, KripkeStructure>) return Json{{"kind", "kripke"}, {"value", encode(x)}};
        else return Json{{"kind", "graph"}, {"value", encode(x)}};
      },
      c);
}

Json encode(const Tableau& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes())
    nodes.push_back(Json{{"id", n.id},
                         {"parent", optional_json(n.parent)},
                         {"prefix", n.prefix},
                         {"formula", render(n.formula)},
                         {"rule", to_string(n.rule)},
                         {"premise", optional_json(n.premise)}});
  Json closures = Json::array();
  for (const auto& [leaf, c] : t.closures())
    closures.push_back(Json{{"branch", leaf}, {"first", c.first}, {"second", optional_json(c.second)}});
  auto status = t.status();
  Json st{{"kind", to_string(status.kind)}};
  if (status.branch) st["branch"] = *status.branch;
  return Json{{"logic", to_string(t.logic())},
              {"nodes", nodes},
              {"closures", closures},
              {"open_branches", t.open_branches()},
              {"status", st}};
}

Json encode(const ResolutionGraph& g) {
  Json nodes = Json::array();
  bool first_order = false;
  for (const auto& n : g.nodes()) {
    Json node{{"id", n.id}, {"clause", render(n.clause)}};
    if (n.parents) {
      node["parents"] = Json::array({n.parents->first, n.parents->second});
      node["pivot"] = Json::array({render(n.pivot->first), render(n.pivot->second)});
      if (!n.left_substitution.empty() || !n.right_substitution.empty()) {
        node["left_substitution"] = encode(n.left_substitution);
        node["right_substitution"] = encode(n.right_substitution);
      }
    }
    for (const auto& l : n.clause)
      if (!l.is_propositional()) first_order = true;
    nodes.push_back(node);
  }
  return Json{{"first_order", first_order}, {"nodes", nodes}, {"empty_clause", optional_json(g.empty_clause())}};
}

Json encode(const HornMarkingState& s) {
  Json clauses = Json::array();
  for (const auto& c : s.clauses) clauses.push_back(render(c));
  Json marks = Json::array();
  for (const auto& m : s.marks) marks.push_back(Json{{"variable", m.variable}, {"clause", m.clause}});
  return Json{{"clauses", clauses}, {"marks", marks}, {"claim", to_string(s.claim)}};
}

Json encode(const BisimRelation& r) {
  Json out = Json::array();
  for (const auto& [a, b] : r) out.push_back(encode_pair(a, b));
  return out;
}

Json encode(const BisimulationState& s) {
  Json log = Json::array();
  for (const auto& r : s.log) {
    Json entry{{"pair", encode_pair(r.pair.first, r.pair.second)}, {"reason", to_string(r.reason)}};
    if (r.successor) entry["successor"] = *r.successor;
    log.push_back(entry);
  }
  return Json{{"left", encode(s.left)},
              {"right", encode(s.right)},
              {"relation", encode(s.relation)},
              {"log", log},
              {"concluded", s.concluded}};
}

Formula decode_formula(const Json& j, Logic logic, const std::string& path) {
  auto text = expect_string(j, path);
  return parsed(path, [&] { return parse_formula(text, logic); });
}

FoFormula decode_fo_formula(const Json& j, const std::string& path) {
  auto text = expect_string(j, path);
  return parsed(path, [&] { return parse_fo_formula(text); });
}

Literal decode_literal(const Json& j, const std::string& path) {
  auto text = expect_string(j, path);
  return parsed(path, [&] { return parse_literal(text); });
}

Clause decode_clause(const Json& j, const std::string& path) {
  if (j.is_array()) {
    Clause c;
    for (std::size_t i = 0; i < j.size(); ++i) c.insert(decode_literal(j[i], at(path, i)));
    return c;
  }
  auto text = expect_string(j, path);
  return parsed(path, [&] { return parse_clause(text); });
}

ClauseSet decode_clause_set(const Json& j, const std::string& path) {
  if (j.is_string()) return parsed(path, [&] { return parse_clause_set(j.get<std::string>()); });
  expect_array(j, path);
  ClauseSet s;
  for (std::size_t i = 0; i < j.size(); ++i) s.insert(decode_clause(j[i], at(path, i)));
  return s;
}

Substitution decode_substitution(const Json& j, const std::string& path) {
  if (j.is_string()) return parsed(path, [&] { return parse_substitution(j.get<std::string>()); });
  expect_object(j, path);
  Substitution s;
  for (const auto& [v, t] : j.items()) {
    auto p = field(path, v);
    if (!is_variable_name(v)) schema_error(p, "'" + v + "' is not a variable");
    auto text = expect_string(t, p);
    s.emplace(v, parsed(p, [&] { return parse_term(text); }));
  }
  return s;
}

Valuation decode_valuation(const Json& j, const std::string& path) {
  expect_object(j, path);
  Valuation v;
  for (const auto& [a, b] : j.items()) {
    auto p = field(path, a);
    if (b.is_number_integer() && (b == 0 || b == 1)) v[a] = b == 1;
    else v[a] = expect_bool(b, p);
  }
  return v;
}

KripkeStructure decode_kripke(const Json& j, const std::string& path) {
  KripkeStructure k;
  const auto& worlds = expect_array(require(j, "worlds", path), field(path, "worlds"));
  for (std::size_t i = 0; i < worlds.size(); ++i) k.worlds.push_back(expect_string(worlds[i], at(field(path, "worlds"), i)));
  if (auto it = j.find("edges"); it != j.end()) {
    expect_array(*it, field(path, "edges"));
    for (std::size_t i = 0; i < it->size(); ++i) k.edges.insert(decode_pair((*it)[i], at(field(path, "edges"), i)));
  }
  if (auto it = j.find("labels"); it != j.end()) {
    expect_object(*it, field(path, "labels"));
    for (const auto& [w, atoms] : it->items()) {
      auto p = field(field(path, "labels"), w);
      expect_array(atoms, p);
      auto& label = k.labels[w];
      for (std::size_t i = 0; i < atoms.size(); ++i) label.insert(expect_string(atoms[i], at(p, i)));
    }
  }
  if (auto it = j.find("designated"); it != j.end() && !it->is_null())
    k.designated = expect_string(*it, field(path, "designated"));
  try {
    k.validate();
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  return k;
}

ColoredGraph decode_graph(const Json& j, const std::string& path) {
  ColoredGraph g;
  const auto& nodes = expect_array(require(j, "nodes", path), field(path, "nodes"));
  for (std::size_t i = 0; i < nodes.size(); ++i) g.nodes.push_back(decode_node(nodes[i], at(field(path, "nodes"), i)));
  if (auto it = j.find("edges"); it != j.end()) {
    expect_array(*it, field(path, "edges"));
    for (std::size_t i = 0; i < it->size(); ++i) {
      auto p = at(field(path, "edges"), i);
      const auto& e = (*it)[i];
      if (!e.is_array() || e.size() != 2) schema_error(p, "expected a pair");
      g.edges.insert({decode_node(e[0], at(p, 0)), decode_node(e[1], at(p, 1))});
    }
  }
  if (auto it = j.find("colors"); it != j.end()) {
    expect_object(*it, field(path, "colors"));
    for (const auto& [key, cs] : it->items()) {
      auto p = field(field(path, "colors"), key);
      Node n = 0;
      try {
        std::size_t used = 0;
        n = std::stoi(key, &used);
        if (used != key.size()) schema_error(p, "node keys must be integers");
      } catch (const std::logic_error&) {
        schema_error(p, "node keys must be integers");
      }
      expect_array(cs, p);
      for (std::size_t i = 0; i < cs.size(); ++i) g.colors[n].insert(expect_string(cs[i], at(p, i)));
    }
  }
  try {
    g.validate();
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  return g;
}

NodeSet decode_node_set(const Json& j, const std::string& path) {
  expect_array(j, path);
  NodeSet s;
  for (std::size_t i = 0; i < j.size(); ++i) s.insert(decode_node(j[i], at(path, i)));
  return s;
}

namespace {

std::vector<std::vector<bool>> decode_bool_matrix(const Json& j, const std::string& path) {
  expect_array(j, path);
  std::vector<std::vector<bool>> out;
  for (std::size_t r = 0; r < j.size(); ++r) {
    auto p = at(path, r);
    expect_array(j[r], p);
    std::vector<bool> row;
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      const auto& cell = j[r][c];
      if (cell.is_number_integer() && (cell == 0 || cell == 1)) row.push_back(cell == 1);
      else row.push_back(expect_bool(cell, at(p, c)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

TruthTable decode_truth_table(const Json& j, const std::string& path) {
  TruthTable t;
  const auto& atoms = expect_array(require(j, "atoms", path), field(path, "atoms"));
  for (std::size_t i = 0; i < atoms.size(); ++i) t.atoms.push_back(expect_string(atoms[i], at(field(path, "atoms"), i)));
  const auto& cols = expect_array(require(j, "columns", path), field(path, "columns"));
  for (std::size_t i = 0; i < cols.size(); ++i)
    t.columns.push_back(decode_formula(cols[i], Logic::PL, at(field(path, "columns"), i)));
  t.rows = decode_bool_matrix(require(j, "rows", path), field(path, "rows"));
  return t;
}

EvaluationTable decode_evaluation_table(const Json& j, const std::string& path) {
  EvaluationTable t;
  const auto& rows = expect_array(require(j, "formulas", path), field(path, "formulas"));
  for (std::size_t i = 0; i < rows.size(); ++i)
    t.formulas.push_back(decode_formula(rows[i], Logic::ML, at(field(path, "formulas"), i)));
  const auto& worlds = expect_array(require(j, "worlds", path), field(path, "worlds"));
  for (std::size_t i = 0; i < worlds.size(); ++i)
    t.worlds.push_back(expect_string(worlds[i], at(field(path, "worlds"), i)));
  t.cells = decode_bool_matrix(require(j, "cells", path), field(path, "cells"));
  return t;
}

BisimRelation decode_relation(const Json& j, const std::string& path) {
  expect_array(j, path);
  BisimRelation r;
  for (std::size_t i = 0; i < j.size(); ++i) r.insert(decode_pair(j[i], at(path, i)));
  return r;
}

Tableau decode_tableau(const Json& j, const std::string& path) {
  Logic logic = Logic::PL;
  try {
    logic = logic_from_string(expect_string(require(j, "logic", path), field(path, "logic")));
  } catch (const Error& e) {
    if (e.code() == "schema_violation") throw;
    schema_error(field(path, "logic"), e.what());
  }
  std::vector<TableauNode> nodes;
  const auto& js = expect_array(require(j, "nodes", path), field(path, "nodes"));
  for (std::size_t i = 0; i < js.size(); ++i) {
    auto p = at(field(path, "nodes"), i);
    const auto& n = expect_object(js[i], p);
    TableauRule rule = TableauRule::Root;
    try {
      rule = tableau_rule_from_string(expect_string(require(n, "rule", p), field(p, "rule")));
    } catch (const Error& e) {
      if (e.code() == "schema_violation") throw;
      schema_error(field(p, "rule"), e.what());
    }
    nodes.push_back(TableauNode{static_cast<int>(expect_int(require(n, "id", p), field(p, "id"))),
                                optional_int(n, "parent", p), expect_string(require(n, "prefix", p), field(p, "prefix")),
                                decode_formula(require(n, "formula", p), logic, field(p, "formula")), rule,
                                optional_int(n, "premise", p)});
  }
  std::map<int, Closure> closures;
  if (auto it = j.find("closures"); it != j.end()) {
    expect_array(*it, field(path, "closures"));
    for (std::size_t i = 0; i < it->size(); ++i) {
      auto p = at(field(path, "closures"), i);
      const auto& c = (*it)[i];
      closures[static_cast<int>(expect_int(require(c, "branch", p), field(p, "branch")))] =
          Closure{static_cast<int>(expect_int(require(c, "first", p), field(p, "first"))), optional_int(c, "second", p)};
    }
  }
  try {
    return Tableau::restore(logic, std::move(nodes), std::move(closures));
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

ResolutionGraph decode_resolution_graph(const Json& j, const std::string& path) {
  bool first_order = false;
  if (auto it = j.find("first_order"); it != j.end()) first_order = expect_bool(*it, field(path, "first_order"));
  std::vector<ResolutionNode> nodes;
  const auto& js = expect_array(require(j, "nodes", path), field(path, "nodes"));
  for (std::size_t i = 0; i < js.size(); ++i) {
    auto p = at(field(path, "nodes"), i);
    const auto& n = expect_object(js[i], p);
    ResolutionNode node{static_cast<int>(expect_int(require(n, "id", p), field(p, "id"))),
                        decode_clause(require(n, "clause", p), field(p, "clause")), {}, {}, {}, {}};
    if (auto it = n.find("parents"); it != n.end() && !it->is_null()) {
      auto pp = field(p, "parents");
      if (!it->is_array() || it->size() != 2) schema_error(pp, "expected two parent ids");
      node.parents = std::pair{static_cast<int>(expect_int((*it)[0], at(pp, 0))),
                               static_cast<int>(expect_int((*it)[1], at(pp, 1)))};
      const auto& pivot = require(n, "pivot", p);
      auto pv = field(p, "pivot");
      if (!pivot.is_array() || pivot.size() != 2) schema_error(pv, "expected two pivot literals");
      node.pivot = std::pair{decode_literal(pivot[0], at(pv, 0)), decode_literal(pivot[1], at(pv, 1))};
      if (auto s = n.find("left_substitution"); s != n.end())
        node.left_substitution = decode_substitution(*s, field(p, "left_substitution"));
      if (auto s = n.find("right_substitution"); s != n.end())
        node.right_substitution = decode_substitution(*s, field(p, "right_substitution"));
    }
    nodes.push_back(std::move(node));
  }
  try {
    return ResolutionGraph::restore(std::move(nodes), first_order);
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

HornMarkingState decode_horn_state(const Json& j, const std::string& path) {
  HornMarkingState s;
  const auto& clauses = expect_array(require(j, "clauses", path), field(path, "clauses"));
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < clauses.size(); ++i)
    parts.push_back(decode_formula(clauses[i], Logic::PL, at(field(path, "clauses"), i)));
  try {
    s = HornMarkingState::create(conjoin(parts));
  } catch (const Error& e) {
    schema_error(field(path, "clauses"), e.what());
  }
  if (s.clauses.size() != parts.size()) schema_error(field(path, "clauses"), "each entry must be a single clause");
  if (auto it = j.find("marks"); it != j.end()) {
    expect_array(*it, field(path, "marks"));
    for (std::size_t i = 0; i < it->size(); ++i) {
      auto p = at(field(path, "marks"), i);
      auto verdict = s.mark(expect_string(require((*it)[i], "variable", p), field(p, "variable")),
                            static_cast<std::size_t>(expect_int(require((*it)[i], "clause", p), field(p, "clause"))));
      if (!verdict.accepted) schema_error(p, verdict.message);
    }
  }
  if (auto it = j.find("claim"); it != j.end()) {
    HornClaim claim = HornClaim::None;
    try {
      claim = horn_claim_from_string(expect_string(*it, field(path, "claim")));
    } catch (const Error& e) {
      if (e.code() == "schema_violation") throw;
      schema_error(field(path, "claim"), e.what());
    }
    if (claim != HornClaim::None) {
      auto verdict = s.conclude(claim);
      if (!verdict.accepted) schema_error(field(path, "claim"), verdict.message);
    }
  }
  return s;
}

BisimulationState decode_bisimulation_state(const Json& j, const std::string& path) {
  auto s = BisimulationState::create(decode_kripke(require(j, "left", path), field(path, "left")),
                                     decode_kripke(require(j, "right", path), field(path, "right")));
  if (auto it = j.find("log"); it != j.end()) {
    expect_array(*it, field(path, "log"));
    for (std::size_t i = 0; i < it->size(); ++i) {
      auto p = at(field(path, "log"), i);
      const auto& e = (*it)[i];
      Removal r;
      r.pair = decode_pair(require(e, "pair", p), field(p, "pair"));
      try {
        r.reason = removal_reason_from_string(expect_string(require(e, "reason", p), field(p, "reason")));
      } catch (const Error& err) {
        if (err.code() == "schema_violation") throw;
        schema_error(field(p, "reason"), err.what());
      }
      if (auto succ = e.find("successor"); succ != e.end() && !succ->is_null())
        r.successor = expect_string(*succ, field(p, "successor"));
      auto verdict = s.remove(r);
      if (!verdict.accepted) schema_error(p, verdict.message);
    }
  }
  if (auto it = j.find("concluded"); it != j.end() && expect_bool(*it, field(path, "concluded"))) {
    auto verdict = s.conclude(s.relation);
    if (!verdict.accepted) schema_error(field(path, "concluded"), verdict.message);
  }
  return s;
}

}  // namespace logicbench
