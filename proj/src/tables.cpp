#include "logicbench/tables.hpp"

#include <algorithm>
#include <set>

#include "logicbench/error.hpp"
#include "logicbench/syntax.hpp"

namespace logicbench {

namespace {

bool is_subformula(const std::vector<Formula>& subs, const Formula& g) {
  return std::find(subs.begin(), subs.end(), g) != subs.end();
}

void check_columns(const Formula& f, const std::vector<Formula>& columns) {
  if (columns.empty() || columns.back() != f)
    throw Error("shape_mismatch", "the last column must be the formula itself");
  auto subs = subformulas(f);
  for (std::size_t c = 0; c < columns.size(); ++c)
    if (!is_subformula(subs, columns[c]))
      throw Error("shape_mismatch", render(columns[c]) + " is not a subformula", "column " + std::to_string(c));
}

std::string cell_locus(std::size_t r, std::size_t c) {
  return "cell " + std::to_string(r) + "," + std::to_string(c);
}

}  // namespace

CellCheck truth_table_check(const Formula& f, const TruthTable& student) {
  std::set<std::string> seen(student.atoms.begin(), student.atoms.end());
  if (seen.size() != student.atoms.size()) throw Error("shape_mismatch", "duplicate atom columns");
  for (const auto& a : atoms(f))
    if (!seen.count(a)) throw Error("shape_mismatch", "missing atom column " + a, a);
  if (student.atoms.size() > 20) throw Error("shape_mismatch", "too many atoms");
  check_columns(f, student.columns);
  const std::size_t n = std::size_t{1} << student.atoms.size();
  if (student.rows.size() != n)
    throw Error("shape_mismatch", "expected " + std::to_string(n) + " rows, got " + std::to_string(student.rows.size()));
  CellCheck out;
  for (std::size_t r = 0; r < n; ++r) {
    if (student.rows[r].size() != student.columns.size())
      throw Error("shape_mismatch", "row has the wrong number of cells", "row " + std::to_string(r));
    Valuation v = row_valuation(student.atoms, r);
    std::vector<StepVerdict> row;
    for (std::size_t c = 0; c < student.columns.size(); ++c) {
      bool expected = eval_pl(student.columns[c], v);
      if (student.rows[r][c] == expected) {
        row.push_back(StepVerdict::accept("correct", cell_locus(r, c)));
      } else {
        row.push_back(StepVerdict::reject("wrong_value", render(student.columns[c]) + " is " +
                                                            (expected ? "true" : "false") + " in this row",
                                          cell_locus(r, c), expected ? "1" : "0"));
        ++out.wrong;
      }
    }
    out.cells.push_back(std::move(row));
  }
  return out;
}

CellCheck evaluation_table_check(const Formula& f, const KripkeStructure& k, const EvaluationTable& student) {
  k.validate();
  if (student.worlds != k.worlds) throw Error("shape_mismatch", "world columns must follow the structure");
  check_columns(f, student.formulas);
  if (student.cells.size() != student.formulas.size())
    throw Error("shape_mismatch", "one row per formula is required");
  CellCheck out;
  for (std::size_t r = 0; r < student.formulas.size(); ++r) {
    if (student.cells[r].size() != k.worlds.size())
      throw Error("shape_mismatch", "row has the wrong number of cells", "row " + std::to_string(r));
    std::vector<StepVerdict> row;
    for (std::size_t c = 0; c < k.worlds.size(); ++c) {
      bool expected = eval_ml(student.formulas[r], k, k.worlds[c]);
      if (student.cells[r][c] == expected) {
        row.push_back(StepVerdict::accept("correct", cell_locus(r, c)));
      } else {
        row.push_back(StepVerdict::reject("wrong_value", render(student.formulas[r]) + " is " +
                                                            (expected ? "true" : "false") + " at " + k.worlds[c],
                                          cell_locus(r, c), expected ? "1" : "0"));
        ++out.wrong;
      }
    }
    out.cells.push_back(std::move(row));
  }
  return out;
}

}  // namespace logicbench
