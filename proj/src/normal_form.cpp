#include "logicbench/normal_form.hpp"

#include <algorithm>

#include "logicbench/error.hpp"

namespace logicbench {

std::string_view to_string(NormalFormKind kind) {
  switch (kind) {
    case NormalFormKind::NNF: return "NNF";
    case NormalFormKind::CNF: return "CNF";
    case NormalFormKind::DNF: return "DNF";
    case NormalFormKind::HORN: return "HORN";
    case NormalFormKind::IMPLICATION_FORM: return "IMPLICATION_FORM";
  }
  return "NNF";
}

NormalFormKind normal_form_from_string(std::string_view text) {
  if (text == "NNF") return NormalFormKind::NNF;
  if (text == "CNF") return NormalFormKind::CNF;
  if (text == "DNF") return NormalFormKind::DNF;
  if (text == "HORN") return NormalFormKind::HORN;
  if (text == "IMPLICATION_FORM") return NormalFormKind::IMPLICATION_FORM;
  throw Error("unknown_normal_form", "unknown normal form '" + std::string(text) + "'");
}

namespace {

bool is_nnf(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::True:
    case Op::False:
      return true;
    case Op::Not:
      return f.operand().is_atom();
    case Op::And:
    case Op::Or:
      return is_nnf(f.lhs()) && is_nnf(f.rhs());
    case Op::Box:
    case Op::Diamond:
      return is_nnf(f.operand());
    default:
      return false;
  }
}

// Flat ∘-junction of literals (inner) inside a flat •-junction (outer).
bool is_two_level(const Formula& f, Op outer, Op inner) {
  for (const auto& part : flatten(f, outer))
    for (const auto& lit : flatten(part, inner))
      if (!lit.is_literal()) return false;
  return true;
}

bool is_horn(const Formula& f) {
  if (!is_two_level(f, Op::And, Op::Or)) return false;
  for (const auto& clause : flatten(f, Op::And)) {
    auto lits = flatten(clause, Op::Or);
    if (std::count_if(lits.begin(), lits.end(), [](const Formula& l) { return l.is_atom(); }) > 1) return false;
  }
  return true;
}

std::optional<ImplicationClause> as_implication(const Formula& c) {
  if (c.op() != Op::Implies) return std::nullopt;
  ImplicationClause out;
  const Formula& premise = c.lhs();
  if (premise.op() != Op::True) {
    for (const auto& p : flatten(premise, Op::And)) {
      if (!p.is_atom()) return std::nullopt;
      out.premise.insert(p.name());
    }
  }
  const Formula& conclusion = c.rhs();
  if (conclusion.is_atom())
    out.conclusion = conclusion.name();
  else if (conclusion.op() != Op::False)
    return std::nullopt;
  return out;
}

}  // namespace

bool check_normal_form(const Formula& f, NormalFormKind kind) {
  if (kind == NormalFormKind::NNF) return is_nnf(f);
  if (f.is_modal())
    throw Error("unsupported_normal_form",
                std::string(to_string(kind)) + " is only checked for propositional formulas");
  switch (kind) {
    case NormalFormKind::CNF: return is_two_level(f, Op::And, Op::Or);
    case NormalFormKind::DNF: return is_two_level(f, Op::Or, Op::And);
    case NormalFormKind::HORN: return is_horn(f);
    case NormalFormKind::IMPLICATION_FORM: {
      for (const auto& c : flatten(f, Op::And))
        if (!as_implication(c)) return false;
      return true;
    }
    default: return false;
  }
}

ClauseSet to_clause_set(const Formula& f) {
  if (f.is_modal() || !is_two_level(f, Op::And, Op::Or)) throw Error("not_cnf", "formula is not in CNF");
  ClauseSet out;
  for (const auto& part : flatten(f, Op::And)) {
    Clause clause;
    for (const auto& lit : flatten(part, Op::Or)) {
      if (lit.is_atom())
        clause.insert(Literal{true, lit.name(), {}});
      else
        clause.insert(Literal{false, lit.operand().name(), {}});
    }
    out.insert(std::move(clause));
  }
  return out;
}

std::vector<ImplicationClause> implication_clauses(const Formula& f) {
  if (f.is_modal()) throw Error("not_implication_form", "formula is not in implication form");
  std::vector<ImplicationClause> out;
  for (const auto& c : flatten(f, Op::And)) {
    auto clause = as_implication(c);
    if (!clause) throw Error("not_implication_form", "formula is not in implication form");
    out.push_back(std::move(*clause));
  }
  return out;
}

std::string render(const ImplicationClause& c) {
  std::string out;
  if (c.premise.empty()) {
    out = "1";
  } else {
    bool first = true;
    for (const auto& p : c.premise) {
      if (!first) out += " & ";
      first = false;
      out += p;
    }
  }
  return out + " -> " + (c.conclusion ? *c.conclusion : "0");
}

}  // namespace logicbench
