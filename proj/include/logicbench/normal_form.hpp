#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "logicbench/fo.hpp"
#include "logicbench/formula.hpp"

namespace logicbench {

enum class NormalFormKind { NNF, CNF, DNF, HORN, IMPLICATION_FORM };

std::string_view to_string(NormalFormKind kind);
NormalFormKind normal_form_from_string(std::string_view text);

// Syntactic recognition only. NNF admits ⊤, ⊥, literals, ∧, ∨ and (for modal
// formulas) □, ◇; CNF/DNF/HORN/IMPLICATION_FORM are propositional and raise
// Error("unsupported_normal_form") on formulas containing modalities.
bool check_normal_form(const Formula& f, NormalFormKind kind);

// One clause per conjunct of a CNF formula, duplicate literals collapsed.
// Throws Error("not_cnf") otherwise.
ClauseSet to_clause_set(const Formula& f);

// A clause p1 ∧ … ∧ pk → q of an implication-form formula. An empty premise
// stands for 1, an absent conclusion for 0.
struct ImplicationClause {
  std::set<std::string> premise;
  std::optional<std::string> conclusion;

  friend bool operator==(const ImplicationClause&, const ImplicationClause&) = default;
};

// Clauses in left-to-right conjunct order. Throws Error("not_implication_form").
std::vector<ImplicationClause> implication_clauses(const Formula& f);
std::string render(const ImplicationClause& c);

}  // namespace logicbench
