#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace logicbench {

// First-order term: a variable, or a function symbol applied to arguments
// (constants are nullary functions).
struct Term {
  enum class Kind { Variable, Function };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string name) { return Term{Kind::Variable, std::move(name), {}}; }
  static Term constant(std::string name) { return Term{Kind::Function, std::move(name), {}}; }
  static Term function(std::string name, std::vector<Term> args) {
    return Term{Kind::Function, std::move(name), std::move(args)};
  }

  bool is_variable() const noexcept { return kind == Kind::Variable; }
  bool contains_variable(const std::string& var) const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);
};

// Signed predicate application. A propositional literal is a nullary one.
struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<Term> args;

  Literal complement() const { return Literal{!positive, predicate, args}; }
  bool is_propositional() const noexcept { return args.empty(); }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);
};

using Clause = std::set<Literal>;
using ClauseSet = std::set<Clause>;
using Substitution = std::map<std::string, Term>;

enum class FoOp { Pred, Equals, True, False, Not, And, Or, Implies, Iff, Exists, Forall };

// Immutable first-order formula over a relational signature.
class FoFormula {
 public:
  static FoFormula predicate(std::string name, std::vector<Term> args);
  static FoFormula equals(Term lhs, Term rhs);
  static FoFormula top();
  static FoFormula bottom();
  static FoFormula negation(FoFormula f);
  static FoFormula binary(FoOp op, FoFormula lhs, FoFormula rhs);
  static FoFormula quantifier(FoOp op, std::string variable, FoFormula body);

  FoOp op() const noexcept;
  // Predicate name for Pred, bound variable for quantifiers.
  const std::string& name() const noexcept;
  const std::vector<Term>& terms() const noexcept;
  std::size_t arity() const noexcept;
  const FoFormula& child(std::size_t i) const;
  const FoFormula& body() const { return child(0); }

  friend bool operator==(const FoFormula& a, const FoFormula& b);
  friend std::strong_ordering operator<=>(const FoFormula& a, const FoFormula& b);

 private:
  struct Node;
  explicit FoFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::set<std::string> variables(const Term& t);
std::set<std::string> variables(const Literal& l);
std::set<std::string> variables(const Clause& c);
std::set<std::string> free_variables(const FoFormula& f);

// Predicate names with their arities, as used anywhere in `f`.
std::map<std::string, std::size_t> predicate_signature(const FoFormula& f);

// Colored-graph query signature: binary E, unary colors, equality, no functions.
// `colors` empty means any unary predicate other than E is accepted as a color.
bool uses_graph_signature(const FoFormula& f, const std::set<std::string>& colors = {});

// Simultaneous substitution; variables outside the domain are left untouched.
// Bound variables of a formula are renamed when a substituted term would be captured.
Term apply_substitution(const Term& t, const Substitution& s);
Literal apply_substitution(const Literal& l, const Substitution& s);
Clause apply_substitution(const Clause& c, const Substitution& s);
FoFormula apply_substitution(const FoFormula& f, const Substitution& s);

// σ ∘ τ in application order: apply `first`, then `second`.
Substitution compose(const Substitution& first, const Substitution& second);

}  // namespace logicbench
