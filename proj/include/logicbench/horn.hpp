#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicbench/formula.hpp"
#include "logicbench/normal_form.hpp"
#include "logicbench/verdict.hpp"

namespace logicbench {

enum class HornClaim { None, Satisfiable, Unsatisfiable };

std::string_view to_string(HornClaim claim);
HornClaim horn_claim_from_string(std::string_view text);

struct HornMark {
  std::string variable;
  std::size_t clause = 0;

  friend bool operator==(const HornMark&, const HornMark&) = default;
};

// A student's run of the marking algorithm.
struct HornMarkingState {
  std::vector<ImplicationClause> clauses;
  std::vector<HornMark> marks;
  HornClaim claim = HornClaim::None;

  // Throws Error("not_implication_form").
  static HornMarkingState create(const Formula& f);

  bool is_marked(const std::string& variable) const;
  bool premise_marked(std::size_t clause) const;
  // Index of a clause with conclusion 0 whose premise is fully marked.
  std::optional<std::size_t> firing_contradiction() const;
  bool at_fixpoint() const;

  StepVerdict mark(const std::string& variable, std::size_t clause);
  StepVerdict conclude(HornClaim claim);

  friend bool operator==(const HornMarkingState&, const HornMarkingState&) = default;
};

std::pair<HornMarkingState, StepVerdict> horn_step(const HornMarkingState& s, const std::string& variable,
                                                   std::size_t clause);
// Value form: the verdict only; apply with HornMarkingState::conclude to record it.
StepVerdict horn_conclude(const HornMarkingState& s, HornClaim claim);

}  // namespace logicbench
