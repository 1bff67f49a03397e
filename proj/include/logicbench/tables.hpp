#pragma once

#include <string>
#include <vector>

#include "logicbench/formula.hpp"
#include "logicbench/semantics.hpp"
#include "logicbench/verdict.hpp"

namespace logicbench {

struct CellCheck {
  std::vector<std::vector<StepVerdict>> cells;  // same shape as the submitted table
  std::size_t wrong = 0;

  bool all_correct() const { return wrong == 0; }
};

// Compares a student truth table cell by cell. The atoms must cover atoms(f),
// there must be one row per valuation, every column must be a subformula of f
// and the last column must be f. Throws Error("shape_mismatch") otherwise.
CellCheck truth_table_check(const Formula& f, const TruthTable& student);

// Same for an evaluation table over a Kripke structure: worlds in structure
// order, rows must be subformulas of f including f itself.
CellCheck evaluation_table_check(const Formula& f, const KripkeStructure& k, const EvaluationTable& student);

}  // namespace logicbench
