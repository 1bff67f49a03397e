#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicbench/fo.hpp"
#include "logicbench/verdict.hpp"

namespace logicbench {

struct UnifyResult {
  enum class Failure { None, PredicateMismatch, Clash, OccursCheck };

  bool unifiable = false;
  Substitution mgu;  // idempotent
  Failure failure = Failure::None;
};

std::string_view to_string(UnifyResult::Failure failure);

// Robinson unification with occurs check. Signs are ignored; predicates and
// arities must agree.
UnifyResult unify(const Literal& a, const Literal& b);
UnifyResult unify(const Term& a, const Term& b);

struct ResolutionNode {
  int id = 0;
  Clause clause;
  std::optional<std::pair<int, int>> parents;        // absent for input clauses
  std::optional<std::pair<Literal, Literal>> pivot;  // as written in the parents, before σ
  Substitution left_substitution;
  Substitution right_substitution;

  friend bool operator==(const ResolutionNode&, const ResolutionNode&) = default;
};

class ResolutionGraph {
 public:
  static ResolutionGraph create(const ClauseSet& inputs);
  // Re-checks every derived node against its parents.
  static ResolutionGraph restore(std::vector<ResolutionNode> nodes, bool first_order);

  const std::vector<ResolutionNode>& nodes() const noexcept { return nodes_; }
  bool has_node(int id) const { return id >= 0 && id < static_cast<int>(nodes_.size()); }
  const ResolutionNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::optional<int> empty_clause() const;
  bool derived_empty_clause() const { return empty_clause().has_value(); }

  // Propositional step: pivot ∈ c₁ and its complement ∈ c₂.
  StepVerdict resolve_pl(int first, int second, const Literal& pivot, const Clause& claimed);
  // First-order step. Each σ acts on its own parent only, which renames the
  // parents apart; pivots are literals of the parents before substitution.
  StepVerdict resolve_fo(int first, const Substitution& first_subst, int second, const Substitution& second_subst,
                         const Literal& first_pivot, const Literal& second_pivot, const Clause& claimed);

  friend bool operator==(const ResolutionGraph&, const ResolutionGraph&) = default;

 private:
  std::vector<ResolutionNode> nodes_;
};

// (p₁ ∖ {pivot}) ∪ (p₂ ∖ {¬pivot})
Clause resolvent(const Clause& first, const Clause& second, const Literal& pivot);

std::pair<ResolutionGraph, StepVerdict> resolve_pl(const ResolutionGraph& g, int first, int second,
                                                   const Literal& pivot, const Clause& claimed);
std::pair<ResolutionGraph, StepVerdict> resolve_fo(const ResolutionGraph& g, int first, const Substitution& s1,
                                                   int second, const Substitution& s2,
                                                   const std::pair<Literal, Literal>& pivots, const Clause& claimed);

}  // namespace logicbench
