#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicbench/fo.hpp"
#include "logicbench/formula.hpp"

// Concrete syntax
//
//   ~ ! ¬      negation          [] □   box        <> ◇   diamond
//   & ∧        conjunction       | ∨    disjunction
//   -> →       implication       <-> ↔  biimplication
//   true 1 ⊤   verum             false 0 ⊥  falsum
//   exists ∃ / forall ∀ <var> <formula>   (FO, binds like negation)
//
// Binding strength: unary > & > | > -> > <->. `->` associates to the right,
// `&`, `|` and `<->` to the left.
namespace logicbench {

enum class Notation { Ascii, Unicode };

// Parses propositional (PL) or modal (ML) text. Modal operators in PL mode
// raise a ParseError with code "wrong_logic".
Formula parse_formula(std::string_view text, Logic logic);

// Parses a first-order formula; plain identifiers in term position are variables.
FoFormula parse_fo_formula(std::string_view text);

// Clause-level syntax: identifiers matching [u-z][0-9_]* are variables,
// everything else is a constant or function symbol.
bool is_variable_name(std::string_view name);
Term parse_term(std::string_view text);
Literal parse_literal(std::string_view text);
// "{P(x), ~Q(a)}" or "P(x) | ~Q(a)"; "{}" is the empty clause.
Clause parse_clause(std::string_view text);
// Clauses separated by ';' or juxtaposed braces: "{x, ~y} {z}".
ClauseSet parse_clause_set(std::string_view text);
Substitution parse_substitution(std::string_view text);  // "{x -> f(a), y -> b}"

std::string render(const Formula& f, Notation notation = Notation::Ascii);
std::string render(const FoFormula& f, Notation notation = Notation::Ascii);
std::string render(const Term& t);
std::string render(const Literal& l);
std::string render(const Clause& c);
std::string render(const ClauseSet& s);
std::string render(const Substitution& s);

// Half-open code-point range of the subformula at `path` inside render(f, notation).
std::pair<std::size_t, std::size_t> locate(const Formula& f, const Path& path,
                                           Notation notation = Notation::Ascii);

}  // namespace logicbench
