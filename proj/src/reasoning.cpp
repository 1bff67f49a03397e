#include "logicbench/reasoning.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "logicbench/error.hpp"

namespace logicbench {

namespace {

Formula nnf(const Formula& f, bool negate) {
  switch (f.op()) {
    case Op::Atom: return negate ? Formula::negation(f) : f;
    case Op::True: return negate ? Formula::bottom() : f;
    case Op::False: return negate ? Formula::top() : f;
    case Op::Not: return nnf(f.operand(), !negate);
    case Op::And:
      return negate ? Formula::disjunction(nnf(f.lhs(), true), nnf(f.rhs(), true))
                    : Formula::conjunction(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Or:
      return negate ? Formula::conjunction(nnf(f.lhs(), true), nnf(f.rhs(), true))
                    : Formula::disjunction(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Implies:
      return negate ? Formula::conjunction(nnf(f.lhs(), false), nnf(f.rhs(), true))
                    : Formula::disjunction(nnf(f.lhs(), true), nnf(f.rhs(), false));
    case Op::Iff: {
      // a ↔ b  ≡ (¬a ∨ b) ∧ (a ∨ ¬b);  ¬(a ↔ b) ≡ (a ∨ b) ∧ (¬a ∨ ¬b)
      Formula pa = nnf(f.lhs(), false), na = nnf(f.lhs(), true);
      Formula pb = nnf(f.rhs(), false), nb = nnf(f.rhs(), true);
      if (negate) return Formula::conjunction(Formula::disjunction(pa, pb), Formula::disjunction(na, nb));
      return Formula::conjunction(Formula::disjunction(na, pb), Formula::disjunction(pa, nb));
    }
    case Op::Box: return negate ? Formula::diamond(nnf(f.operand(), true)) : Formula::box(nnf(f.operand(), false));
    case Op::Diamond:
      return negate ? Formula::box(nnf(f.operand(), true)) : Formula::diamond(nnf(f.operand(), false));
  }
  return f;
}

// ------------------------------------------------------------------- DPLL

using Lit = int;  // ±(var index + 1)

struct Cnf {
  int vars = 0;
  std::vector<std::vector<Lit>> clauses;
};

// Tseitin encoding; returns the literal standing for `f`.
Lit encode(const Formula& f, Cnf& cnf, std::map<std::string, int>& atom_vars) {
  switch (f.op()) {
    case Op::Atom: {
      auto [it, fresh] = atom_vars.emplace(f.name(), 0);
      if (fresh) it->second = ++cnf.vars;
      return it->second;
    }
    case Op::True:
    case Op::False: {
      Lit t = ++cnf.vars;
      cnf.clauses.push_back({t});
      return f.op() == Op::True ? t : -t;
    }
    case Op::Not: return -encode(f.operand(), cnf, atom_vars);
    case Op::Box:
    case Op::Diamond: throw Error("wrong_logic", "modal operator in propositional formula");
    default: break;
  }
  Lit a = encode(f.lhs(), cnf, atom_vars);
  Lit b = encode(f.rhs(), cnf, atom_vars);
  Lit x = ++cnf.vars;
  switch (f.op()) {
    case Op::And:
      cnf.clauses.push_back({-x, a});
      cnf.clauses.push_back({-x, b});
      cnf.clauses.push_back({x, -a, -b});
      break;
    case Op::Or:
      cnf.clauses.push_back({-x, a, b});
      cnf.clauses.push_back({x, -a});
      cnf.clauses.push_back({x, -b});
      break;
    case Op::Implies:
      cnf.clauses.push_back({-x, -a, b});
      cnf.clauses.push_back({x, a});
      cnf.clauses.push_back({x, -b});
      break;
    default:  // Iff
      cnf.clauses.push_back({-x, -a, b});
      cnf.clauses.push_back({-x, a, -b});
      cnf.clauses.push_back({x, a, b});
      cnf.clauses.push_back({x, -a, -b});
  }
  return x;
}

class Dpll {
 public:
  explicit Dpll(const Cnf& cnf) : cnf_(cnf), value_(cnf.vars + 1, 0) {}

  bool solve() { return search(); }
  bool value(int var) const { return value_[var] > 0; }

 private:
  int lit_value(Lit l) const {
    int v = value_[std::abs(l)];
    return l > 0 ? v : -v;
  }

  // Unit propagation; false on conflict. Assigned variables go to `trail`.
  bool propagate(std::vector<int>& trail) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& clause : cnf_.clauses) {
        int unassigned = 0;
        Lit last = 0;
        bool satisfied = false;
        for (Lit l : clause) {
          int v = lit_value(l);
          if (v > 0) {
            satisfied = true;
            break;
          }
          if (v == 0) {
            ++unassigned;
            last = l;
          }
        }
        if (satisfied) continue;
        if (unassigned == 0) return false;
        if (unassigned == 1) {
          value_[std::abs(last)] = last > 0 ? 1 : -1;
          trail.push_back(std::abs(last));
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    std::vector<int> trail;
    if (!propagate(trail)) {
      for (int v : trail) value_[v] = 0;
      return false;
    }
    int pick = 0;
    for (int v = 1; v <= cnf_.vars; ++v)
      if (value_[v] == 0) {
        pick = v;
        break;
      }
    if (pick == 0) return true;
    for (int polarity : {1, -1}) {
      value_[pick] = polarity;
      if (search()) return true;
    }
    value_[pick] = 0;
    for (int v : trail) value_[v] = 0;
    return false;
  }

  const Cnf& cnf_;
  std::vector<int> value_;
};

// ------------------------------------------------------------ K tableau

struct ModelTree {
  std::set<std::string> label;
  std::vector<ModelTree> children;
};

struct WorldState {
  std::set<std::string> positive;
  std::set<std::string> negative;
  std::set<Formula> boxes;
  std::set<Formula> diamonds;
};

bool expand(std::vector<Formula> pending, WorldState state, ModelTree& out);

bool successors(const WorldState& state, ModelTree& out) {
  out.label = state.positive;
  out.children.clear();
  for (const auto& d : state.diamonds) {
    std::vector<Formula> pending{d};
    pending.insert(pending.end(), state.boxes.begin(), state.boxes.end());
    ModelTree child;
    if (!expand(std::move(pending), WorldState{}, child)) return false;
    out.children.push_back(std::move(child));
  }
  return true;
}

bool expand(std::vector<Formula> pending, WorldState state, ModelTree& out) {
  while (!pending.empty()) {
    Formula f = pending.back();
    pending.pop_back();
    switch (f.op()) {
      case Op::True: break;
      case Op::False: return false;
      case Op::Atom:
        if (state.negative.count(f.name())) return false;
        state.positive.insert(f.name());
        break;
      case Op::Not:
        if (state.positive.count(f.operand().name())) return false;
        state.negative.insert(f.operand().name());
        break;
      case Op::And:
        pending.push_back(f.rhs());
        pending.push_back(f.lhs());
        break;
      case Op::Or: {
        for (const auto& disjunct : {f.lhs(), f.rhs()}) {
          auto branch = pending;
          branch.push_back(disjunct);
          if (expand(std::move(branch), state, out)) return true;
        }
        return false;
      }
      case Op::Box: state.boxes.insert(f.operand()); break;
      case Op::Diamond: state.diamonds.insert(f.operand()); break;
      default: throw Error("internal", "formula is not in NNF");
    }
  }
  return successors(state, out);
}

void flatten_model(const ModelTree& tree, const World& name, KripkeStructure& k) {
  k.worlds.push_back(name);
  if (!tree.label.empty()) k.labels[name] = tree.label;
  for (std::size_t i = 0; i < tree.children.size(); ++i) {
    World child = name + "." + std::to_string(i + 1);
    k.edges.insert({name, child});
    flatten_model(tree.children[i], child, k);
  }
}

bool labels_match(const KripkeStructure& left, const KripkeStructure& right, const World& a, const World& b) {
  return left.label(a) == right.label(b);
}

}  // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

SatResult pl_satisfiable_dpll(const Formula& f) {
  Cnf cnf;
  std::map<std::string, int> atom_vars;
  Lit root = encode(f, cnf, atom_vars);
  cnf.clauses.push_back({root});
  Dpll solver(cnf);
  SatResult out;
  if (!solver.solve()) return out;
  out.satisfiable = true;
  Valuation v;
  for (const auto& [name, var] : atom_vars) v[name] = solver.value(var);
  out.valuation = std::move(v);
  return out;
}

SatResult pl_satisfiable(const Formula& f) {
  if (f.is_modal()) throw Error("wrong_logic", "modal operator in propositional formula");
  auto names = atoms(f);
  if (names.size() > 20) return pl_satisfiable_dpll(f);
  std::vector<std::string> order(names.begin(), names.end());
  const std::size_t rows = std::size_t{1} << order.size();
  for (std::size_t r = 0; r < rows; ++r) {
    Valuation v = row_valuation(order, r);
    if (eval_pl(f, v)) return SatResult{true, std::move(v), std::nullopt};
  }
  return SatResult{};
}

EquivResult pl_equivalent(const Formula& f, const Formula& g) {
  auto diff = pl_satisfiable(Formula::negation(Formula::biimplication(f, g)));
  EquivResult out;
  out.equivalent = !diff.satisfiable;
  if (diff.satisfiable) {
    Valuation v = *diff.valuation;
    for (const auto& a : atoms(f)) v.emplace(a, false);
    for (const auto& a : atoms(g)) v.emplace(a, false);
    out.valuation = std::move(v);
  }
  return out;
}

SatResult ml_satisfiable(const Formula& f) {
  ModelTree tree;
  SatResult out;
  if (!expand({to_nnf(f)}, WorldState{}, tree)) return out;
  KripkeStructure k;
  flatten_model(tree, "w", k);
  k.designated = "w";
  out.satisfiable = true;
  out.model = std::move(k);
  return out;
}

EquivResult ml_equivalent(const Formula& f, const Formula& g) {
  auto diff = ml_satisfiable(Formula::negation(Formula::biimplication(f, g)));
  EquivResult out;
  out.equivalent = !diff.satisfiable;
  out.model = std::move(diff.model);
  return out;
}

EquivResult equivalent(const Formula& f, const Formula& g) {
  if (f.is_modal() || g.is_modal()) return ml_equivalent(f, g);
  return pl_equivalent(f, g);
}

HornResult horn_mark(const std::vector<ImplicationClause>& clauses) {
  HornResult out;
  std::set<std::string> marked;
  bool changed = true;
  while (changed && out.satisfiable) {
    changed = false;
    for (const auto& c : clauses) {
      bool fires = std::all_of(c.premise.begin(), c.premise.end(),
                               [&](const std::string& p) { return marked.count(p) > 0; });
      if (!fires) continue;
      if (!c.conclusion) {
        out.satisfiable = false;
        break;
      }
      if (marked.insert(*c.conclusion).second) {
        out.marked.push_back(*c.conclusion);
        changed = true;
      }
    }
  }
  if (out.satisfiable) {
    Valuation v;
    for (const auto& c : clauses) {
      for (const auto& p : c.premise) v[p] = marked.count(p) > 0;
      if (c.conclusion) v[*c.conclusion] = marked.count(*c.conclusion) > 0;
    }
    out.witness = std::move(v);
  }
  return out;
}

HornResult horn_mark(const Formula& f) { return horn_mark(implication_clauses(f)); }

bool forth_holds(const KripkeStructure& left, const KripkeStructure& right, const BisimRelation& relation,
                 const World& a, const World& b) {
  auto right_succ = right.successors(b);
  for (const auto& a2 : left.successors(a)) {
    bool matched = std::any_of(right_succ.begin(), right_succ.end(),
                               [&](const World& b2) { return relation.count({a2, b2}) > 0; });
    if (!matched) return false;
  }
  return true;
}

bool back_holds(const KripkeStructure& left, const KripkeStructure& right, const BisimRelation& relation,
                const World& a, const World& b) {
  auto left_succ = left.successors(a);
  for (const auto& b2 : right.successors(b)) {
    bool matched = std::any_of(left_succ.begin(), left_succ.end(),
                               [&](const World& a2) { return relation.count({a2, b2}) > 0; });
    if (!matched) return false;
  }
  return true;
}

BisimRelation max_bisimulation(const KripkeStructure& left, const KripkeStructure& right) {
  left.validate();
  right.validate();
  BisimRelation relation;
  for (const auto& a : left.worlds)
    for (const auto& b : right.worlds)
      if (labels_match(left, right, a, b)) relation.insert({a, b});
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = relation.begin(); it != relation.end();) {
      if (!forth_holds(left, right, relation, it->first, it->second) ||
          !back_holds(left, right, relation, it->first, it->second)) {
        it = relation.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return relation;
}

bool distinguishes(const Formula& f, const KripkeStructure& left, const World& a, const KripkeStructure& right,
                   const World& b) {
  return eval_ml(f, left, a) != eval_ml(f, right, b);
}

bool fo_nonequivalence_witness_check(const FoFormula& f, const FoFormula& g, const ColoredGraph& graph) {
  if (!free_variables(f).empty() || !free_variables(g).empty())
    throw Error("not_a_sentence", "non-equivalence witnesses are checked for sentences");
  return eval_fo(f, graph, {}) != eval_fo(g, graph, {});
}

}  // namespace logicbench
