#include "logicbench/horn.hpp"

#include <algorithm>

#include "logicbench/error.hpp"

namespace logicbench {

std::string_view to_string(HornClaim claim) {
  switch (claim) {
    case HornClaim::None: return "none";
    case HornClaim::Satisfiable: return "satisfiable";
    case HornClaim::Unsatisfiable: return "unsatisfiable";
  }
  return "none";
}

HornClaim horn_claim_from_string(std::string_view text) {
  if (text == "none") return HornClaim::None;
  if (text == "satisfiable") return HornClaim::Satisfiable;
  if (text == "unsatisfiable") return HornClaim::Unsatisfiable;
  throw Error("unknown_claim", "claim must be satisfiable or unsatisfiable");
}

HornMarkingState HornMarkingState::create(const Formula& f) {
  HornMarkingState s;
  s.clauses = implication_clauses(f);
  return s;
}

bool HornMarkingState::is_marked(const std::string& variable) const {
  return std::any_of(marks.begin(), marks.end(), [&](const HornMark& m) { return m.variable == variable; });
}

bool HornMarkingState::premise_marked(std::size_t clause) const {
  const auto& premise = clauses.at(clause).premise;
  return std::all_of(premise.begin(), premise.end(), [&](const std::string& p) { return is_marked(p); });
}

std::optional<std::size_t> HornMarkingState::firing_contradiction() const {
  for (std::size_t i = 0; i < clauses.size(); ++i)
    if (!clauses[i].conclusion && premise_marked(i)) return i;
  return std::nullopt;
}

bool HornMarkingState::at_fixpoint() const {
  for (std::size_t i = 0; i < clauses.size(); ++i)
    if (clauses[i].conclusion && !is_marked(*clauses[i].conclusion) && premise_marked(i)) return false;
  return true;
}

StepVerdict HornMarkingState::mark(const std::string& variable, std::size_t clause) {
  const std::string locus = "clause " + std::to_string(clause);
  if (claim != HornClaim::None) return StepVerdict::reject("concluded", "the run is already concluded", locus);
  if (clause >= clauses.size()) return StepVerdict::reject("unknown_clause", "no such clause", locus);
  const auto& c = clauses[clause];
  if (!c.conclusion || *c.conclusion != variable)
    return StepVerdict::reject("wrong_conclusion", "the clause " + render(c) + " does not conclude " + variable, locus);
  if (is_marked(variable)) return StepVerdict::reject("already_marked", variable + " is already marked", locus);
  for (const auto& p : c.premise)
    if (!is_marked(p))
      return StepVerdict::reject("premise_unsatisfied", "the premise variable " + p + " is not marked yet", locus, p);
  marks.push_back(HornMark{variable, clause});
  return StepVerdict::accept("marked " + variable, locus);
}

StepVerdict horn_conclude(const HornMarkingState& s, HornClaim claim) {
  if (s.claim != HornClaim::None) return StepVerdict::reject("concluded", "the run is already concluded");
  switch (claim) {
    case HornClaim::Unsatisfiable: {
      auto fired = s.firing_contradiction();
      if (!fired)
        return StepVerdict::reject("no_contradiction", "no clause with conclusion 0 has a fully marked premise");
      return StepVerdict::accept("unsatisfiable: clause " + render(s.clauses[*fired]) + " fires",
                                 "clause " + std::to_string(*fired));
    }
    case HornClaim::Satisfiable:
      if (auto fired = s.firing_contradiction())
        return StepVerdict::reject("contradiction_fires", "a clause with conclusion 0 fires",
                                   "clause " + std::to_string(*fired));
      if (!s.at_fixpoint())
        return StepVerdict::reject("premature_claim", "further variables can still be marked");
      return StepVerdict::accept("satisfiable: marked variables true, all others false");
    case HornClaim::None:
      break;
  }
  return StepVerdict::reject("unknown_claim", "claim must be satisfiable or unsatisfiable");
}

StepVerdict HornMarkingState::conclude(HornClaim c) {
  auto verdict = horn_conclude(*this, c);
  if (verdict.accepted) claim = c;
  return verdict;
}

std::pair<HornMarkingState, StepVerdict> horn_step(const HornMarkingState& s, const std::string& variable,
                                                   std::size_t clause) {
  HornMarkingState next = s;
  auto verdict = next.mark(variable, clause);
  if (!verdict.accepted) return {s, verdict};
  return {std::move(next), verdict};
}

}  // namespace logicbench
