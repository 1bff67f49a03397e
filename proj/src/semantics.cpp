#include "logicbench/semantics.hpp"

#include <algorithm>

#include "logicbench/error.hpp"
#include "logicbench/syntax.hpp"

namespace logicbench {

Valuation row_valuation(const std::vector<std::string>& atoms, std::size_t row) {
  Valuation v;
  const std::size_t n = atoms.size();
  for (std::size_t i = 0; i < n; ++i) v[atoms[i]] = (row >> (n - 1 - i)) & 1U;
  return v;
}

bool KripkeStructure::has_world(const World& w) const {
  return std::find(worlds.begin(), worlds.end(), w) != worlds.end();
}

std::vector<World> KripkeStructure::successors(const World& w) const {
  std::vector<World> out;
  for (auto it = edges.lower_bound({w, World{}}); it != edges.end() && it->first == w; ++it)
    out.push_back(it->second);
  return out;
}

const std::set<std::string>& KripkeStructure::label(const World& w) const {
  static const std::set<std::string> empty;
  auto it = labels.find(w);
  return it == labels.end() ? empty : it->second;
}

void KripkeStructure::validate() const {
  std::set<World> seen;
  for (const auto& w : worlds)
    if (!seen.insert(w).second) throw Error("invalid_structure", "duplicate world '" + w + "'", w);
  for (const auto& [a, b] : edges)
    if (!seen.count(a) || !seen.count(b))
      throw Error("invalid_structure", "edge endpoint is not a world", a + "->" + b);
  for (const auto& [w, atoms] : labels)
    if (!seen.count(w)) throw Error("invalid_structure", "label on unknown world '" + w + "'", w);
  if (designated && !seen.count(*designated))
    throw Error("invalid_structure", "designated world is not a world", *designated);
}

bool ColoredGraph::has_node(Node n) const { return std::find(nodes.begin(), nodes.end(), n) != nodes.end(); }

bool ColoredGraph::has_color(Node n, const std::string& color) const {
  auto it = colors.find(n);
  return it != colors.end() && it->second.count(color);
}

void ColoredGraph::validate() const {
  std::set<Node> seen;
  for (auto n : nodes)
    if (!seen.insert(n).second) throw Error("invalid_graph", "duplicate node", std::to_string(n));
  for (const auto& [a, b] : edges)
    if (!seen.count(a) || !seen.count(b))
      throw Error("invalid_graph", "edge endpoint is not a node", std::to_string(a) + "->" + std::to_string(b));
  for (const auto& [n, cs] : colors)
    if (!seen.count(n)) throw Error("invalid_graph", "color on unknown node", std::to_string(n));
}

bool eval_pl(const Formula& f, const Valuation& v) {
  switch (f.op()) {
    case Op::Atom: {
      auto it = v.find(f.name());
      if (it == v.end()) throw Error("missing_atom", "valuation does not assign '" + f.name() + "'", f.name());
      return it->second;
    }
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !eval_pl(f.operand(), v);
    case Op::And: return eval_pl(f.lhs(), v) && eval_pl(f.rhs(), v);
    case Op::Or: return eval_pl(f.lhs(), v) || eval_pl(f.rhs(), v);
    case Op::Implies: return !eval_pl(f.lhs(), v) || eval_pl(f.rhs(), v);
    case Op::Iff: return eval_pl(f.lhs(), v) == eval_pl(f.rhs(), v);
    default:
      throw Error("wrong_logic", "modal operator in propositional evaluation");
  }
}

TruthTable build_truth_table(const Formula& f, const std::vector<std::string>& atom_order) {
  std::set<std::string> order(atom_order.begin(), atom_order.end());
  if (order.size() != atom_order.size()) throw Error("duplicate_atom", "atom order contains duplicates");
  for (const auto& a : atoms(f))
    if (!order.count(a)) throw Error("missing_atom", "atom order lacks '" + a + "'", a);
  if (atom_order.size() > 20) throw Error("too_many_atoms", "truth tables are limited to 20 atoms");

  TruthTable table;
  table.atoms = atom_order;
  for (const auto& g : subformulas(f))
    if (!g.is_atom() || g == f) table.columns.push_back(g);
  const std::size_t rows = std::size_t{1} << atom_order.size();
  table.rows.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    Valuation v = row_valuation(atom_order, r);
    std::vector<bool> row;
    for (const auto& c : table.columns) row.push_back(eval_pl(c, v));
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool eval_ml(const Formula& f, const KripkeStructure& k, const World& w) {
  if (!k.has_world(w)) throw Error("unknown_world", "unknown world '" + w + "'", w);
  switch (f.op()) {
    case Op::Atom: return k.label(w).count(f.name()) > 0;
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !eval_ml(f.operand(), k, w);
    case Op::And: return eval_ml(f.lhs(), k, w) && eval_ml(f.rhs(), k, w);
    case Op::Or: return eval_ml(f.lhs(), k, w) || eval_ml(f.rhs(), k, w);
    case Op::Implies: return !eval_ml(f.lhs(), k, w) || eval_ml(f.rhs(), k, w);
    case Op::Iff: return eval_ml(f.lhs(), k, w) == eval_ml(f.rhs(), k, w);
    case Op::Box: {
      for (const auto& u : k.successors(w))
        if (!eval_ml(f.operand(), k, u)) return false;
      return true;
    }
    case Op::Diamond: {
      for (const auto& u : k.successors(w))
        if (eval_ml(f.operand(), k, u)) return true;
      return false;
    }
  }
  return false;
}

EvaluationTable build_evaluation_table(const Formula& f, const KripkeStructure& k) {
  EvaluationTable t;
  t.formulas = subformulas(f);
  t.worlds = k.worlds;
  for (const auto& g : t.formulas) {
    std::vector<bool> row;
    for (const auto& w : k.worlds) row.push_back(eval_ml(g, k, w));
    t.cells.push_back(std::move(row));
  }
  return t;
}

namespace {

Node lookup(const Term& t, const Assignment& a) {
  if (!t.is_variable()) throw Error("function_symbol", "function symbols are not interpreted in graphs", t.name);
  auto it = a.find(t.name);
  if (it == a.end()) throw Error("unassigned_variable", "variable '" + t.name + "' is unassigned", t.name);
  return it->second;
}

}  // namespace

bool eval_fo(const FoFormula& f, const ColoredGraph& g, const Assignment& a) {
  switch (f.op()) {
    case FoOp::Pred: {
      if (f.name() == "E" && f.terms().size() == 2)
        return g.edges.count({lookup(f.terms()[0], a), lookup(f.terms()[1], a)}) > 0;
      if (f.terms().size() == 1) return g.has_color(lookup(f.terms()[0], a), f.name());
      throw Error("signature", "predicate '" + f.name() + "' is not part of the graph signature", f.name());
    }
    case FoOp::Equals: return lookup(f.terms()[0], a) == lookup(f.terms()[1], a);
    case FoOp::True: return true;
    case FoOp::False: return false;
    case FoOp::Not: return !eval_fo(f.body(), g, a);
    case FoOp::And: return eval_fo(f.child(0), g, a) && eval_fo(f.child(1), g, a);
    case FoOp::Or: return eval_fo(f.child(0), g, a) || eval_fo(f.child(1), g, a);
    case FoOp::Implies: return !eval_fo(f.child(0), g, a) || eval_fo(f.child(1), g, a);
    case FoOp::Iff: return eval_fo(f.child(0), g, a) == eval_fo(f.child(1), g, a);
    case FoOp::Exists:
    case FoOp::Forall: {
      const bool exists = f.op() == FoOp::Exists;
      Assignment inner = a;
      for (auto n : g.nodes) {
        inner[f.name()] = n;
        if (eval_fo(f.body(), g, inner) == exists) return exists;
      }
      return !exists;
    }
  }
  return false;
}

NodeSet query_nodes(const FoFormula& f, const ColoredGraph& g) {
  auto free = free_variables(f);
  if (free.size() != 1)
    throw Error("free_variable_count", "a node query needs exactly one free variable, found " +
                                           std::to_string(free.size()));
  NodeSet out;
  for (auto n : g.nodes)
    if (eval_fo(f, g, {{*free.begin(), n}})) out.insert(n);
  return out;
}

namespace {

// Expands the trace along the children that decide the value.
EvalTrace trace_pl(const Formula& f, const Valuation& v, int budget) {
  EvalTrace t{render(f), std::nullopt, eval_pl(f, v), {}};
  if (budget <= 0 || f.arity() == 0) return t;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    bool cv = eval_pl(f.child(i), v);
    bool decisive = true;
    if (f.op() == Op::And) decisive = t.value || !cv;
    if (f.op() == Op::Or) decisive = !t.value || cv;
    if (decisive) {
      t.because.push_back(trace_pl(f.child(i), v, budget - 1));
      if (f.op() == Op::And || f.op() == Op::Or) break;
    }
  }
  return t;
}

EvalTrace trace_ml(const Formula& f, const KripkeStructure& k, const World& w, int budget) {
  EvalTrace t{render(f), w, eval_ml(f, k, w), {}};
  if (budget <= 0 || f.arity() == 0) return t;
  if (f.op() == Op::Box || f.op() == Op::Diamond) {
    // witness successor: a falsifying one for a false □, a satisfying one for a true ◇
    bool want = f.op() == Op::Diamond;
    if (t.value == want) {
      for (const auto& u : k.successors(w))
        if (eval_ml(f.operand(), k, u) == want) {
          t.because.push_back(trace_ml(f.operand(), k, u, budget - 1));
          break;
        }
    }
    return t;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) {
    bool cv = eval_ml(f.child(i), k, w);
    bool decisive = true;
    if (f.op() == Op::And) decisive = t.value || !cv;
    if (f.op() == Op::Or) decisive = !t.value || cv;
    if (decisive) {
      t.because.push_back(trace_ml(f.child(i), k, w, budget - 1));
      if (f.op() == Op::And || f.op() == Op::Or) break;
    }
  }
  return t;
}

}  // namespace

ModelVerdict check_model(const Formula& f, const Candidate& candidate) {
  if (const auto* v = std::get_if<Valuation>(&candidate)) {
    if (f.is_modal()) throw Error("kind_mismatch", "a modal formula needs a Kripke structure");
    Valuation total = *v;
    for (const auto& a : atoms(f)) total.emplace(a, false);
    ModelVerdict out;
    out.trace = trace_pl(f, total, 3);
    out.satisfies = out.trace.value;
    return out;
  }
  if (const auto* k = std::get_if<KripkeStructure>(&candidate)) {
    k->validate();
    if (!k->designated) throw Error("kind_mismatch", "the Kripke structure needs a designated world");
    ModelVerdict out;
    out.trace = trace_ml(f, *k, *k->designated, 3);
    out.satisfies = out.trace.value;
    return out;
  }
  throw Error("kind_mismatch", "a propositional or modal formula cannot be checked on a graph");
}

ModelVerdict check_model(const FoFormula& f, const Candidate& candidate) {
  const auto* g = std::get_if<ColoredGraph>(&candidate);
  if (!g) throw Error("kind_mismatch", "a first-order formula is checked on a colored graph");
  g->validate();
  if (!free_variables(f).empty()) throw Error("not_a_sentence", "the formula has free variables");
  ModelVerdict out;
  out.satisfies = eval_fo(f, *g, {});
  out.trace = EvalTrace{render(f), std::nullopt, out.satisfies, {}};
  return out;
}

}  // namespace logicbench
