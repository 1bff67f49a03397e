#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace logicbench {

enum class Logic { PL, ML, FO };

std::string_view to_string(Logic logic);
Logic logic_from_string(std::string_view text);

enum class Op { Atom, True, False, Not, And, Or, Implies, Iff, Box, Diamond };

// Position of a subformula: child indices from the root (empty = root).
using Path = std::vector<std::size_t>;

// Immutable propositional/modal formula. Copies share structure.
class Formula {
 public:
  static Formula atom(std::string name);
  static Formula top();
  static Formula bottom();
  static Formula negation(Formula f);
  static Formula box(Formula f);
  static Formula diamond(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula biimplication(Formula lhs, Formula rhs);
  static Formula make(Op op, std::vector<Formula> children);

  Op op() const noexcept;
  // Atom name; empty for every other kind.
  const std::string& name() const noexcept;
  std::size_t arity() const noexcept;
  const Formula& child(std::size_t i) const;
  const Formula& operand() const { return child(0); }
  const Formula& lhs() const { return child(0); }
  const Formula& rhs() const { return child(1); }

  bool is_atom() const noexcept { return op() == Op::Atom; }
  bool is_literal() const noexcept;
  bool is_modal() const noexcept;  // contains □ or ◇ anywhere
  std::size_t size() const noexcept;
  std::size_t depth() const noexcept;
  std::size_t modal_depth() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

bool is_unary(Op op) noexcept;
bool is_binary(Op op) noexcept;

std::set<std::string> atoms(const Formula& f);

// Distinct subformulas in post-order of first occurrence; `f` itself is last.
std::vector<Formula> subformulas(const Formula& f);

const Formula& subformula_at(const Formula& f, const Path& path);
Formula replace_at(const Formula& f, const Path& path, Formula replacement);
// Every position of `f` in pre-order.
std::vector<Path> positions(const Formula& f);

// Flattens nested applications of a binary associative operator.
std::vector<Formula> flatten(const Formula& f, Op op);
Formula conjoin(const std::vector<Formula>& parts);  // ⊤ when empty
Formula disjoin(const std::vector<Formula>& parts);  // ⊥ when empty

}  // namespace logicbench
