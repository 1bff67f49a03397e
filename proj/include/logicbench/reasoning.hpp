#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "logicbench/formula.hpp"
#include "logicbench/normal_form.hpp"
#include "logicbench/semantics.hpp"

namespace logicbench {

struct SatResult {
  bool satisfiable = false;
  std::optional<Valuation> valuation;    // PL witness
  std::optional<KripkeStructure> model;  // ML witness, designated world set
};

struct EquivResult {
  bool equivalent = false;
  std::optional<Valuation> valuation;
  std::optional<KripkeStructure> model;
};

using BisimRelation = std::set<std::pair<World, World>>;

// Negation normal form: →/↔ eliminated, negations pushed to atoms, ¬□/¬◇
// dualised, ¬⊤/¬⊥ folded. Used internally by the decision procedures.
Formula to_nnf(const Formula& f);

// Truth-table enumeration up to 20 atoms, DPLL on a Tseitin encoding beyond.
SatResult pl_satisfiable(const Formula& f);
SatResult pl_satisfiable_dpll(const Formula& f);
EquivResult pl_equivalent(const Formula& f, const Formula& g);

// Logic K, decided by a tableau over sets of NNF formulas.
SatResult ml_satisfiable(const Formula& f);
EquivResult ml_equivalent(const Formula& f, const Formula& g);

// Dispatches on the presence of modal operators.
EquivResult equivalent(const Formula& f, const Formula& g);

struct HornResult {
  std::vector<std::string> marked;  // in marking order
  bool satisfiable = true;
  std::optional<Valuation> witness;  // marked atoms true, the rest false
};

// Least-fixpoint marking; throws Error("not_implication_form").
HornResult horn_mark(const Formula& f);
HornResult horn_mark(const std::vector<ImplicationClause>& clauses);

// Greatest bisimulation, by refining the label-consistent pairs.
BisimRelation max_bisimulation(const KripkeStructure& left, const KripkeStructure& right);
// Pairs of `relation` violating the forth or back condition w.r.t. `relation`.
bool forth_holds(const KripkeStructure& left, const KripkeStructure& right, const BisimRelation& relation,
                 const World& a, const World& b);
bool back_holds(const KripkeStructure& left, const KripkeStructure& right, const BisimRelation& relation,
                const World& a, const World& b);

bool distinguishes(const Formula& f, const KripkeStructure& left, const World& a, const KripkeStructure& right,
                   const World& b);

// Throws Error("not_a_sentence") when either formula has free variables.
bool fo_nonequivalence_witness_check(const FoFormula& f, const FoFormula& g, const ColoredGraph& graph);

}  // namespace logicbench
