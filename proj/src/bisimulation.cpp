#include "logicbench/bisimulation.hpp"

#include <algorithm>

#include "logicbench/error.hpp"

namespace logicbench {

std::string_view to_string(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::LabelMismatch: return "label_mismatch";
    case RemovalReason::ForthFail: return "forth_fail";
    case RemovalReason::BackFail: return "back_fail";
  }
  return "label_mismatch";
}

RemovalReason removal_reason_from_string(std::string_view text) {
  if (text == "label_mismatch") return RemovalReason::LabelMismatch;
  if (text == "forth_fail") return RemovalReason::ForthFail;
  if (text == "back_fail") return RemovalReason::BackFail;
  throw Error("unknown_reason", "justification must be label_mismatch, forth_fail or back_fail");
}

BisimulationState BisimulationState::create(const KripkeStructure& left, const KripkeStructure& right) {
  left.validate();
  right.validate();
  BisimulationState s{left, right, {}, {}, false};
  for (const auto& a : left.worlds)
    for (const auto& b : right.worlds) s.relation.insert({a, b});
  return s;
}

namespace {

std::string pair_locus(const std::pair<World, World>& p) { return "(" + p.first + "," + p.second + ")"; }

}  // namespace

StepVerdict BisimulationState::justify(const Removal& r) const {
  const std::string locus = pair_locus(r.pair);
  if (concluded) return StepVerdict::reject("concluded", "the relation is already concluded", locus);
  if (!relation.count(r.pair)) return StepVerdict::reject("pair_absent", "the pair is not in the relation", locus);
  const auto& [a, b] = r.pair;
  switch (r.reason) {
    case RemovalReason::LabelMismatch:
      if (left.label(a) == right.label(b))
        return StepVerdict::reject("justification_fails", a + " and " + b + " carry the same atoms", locus);
      return StepVerdict::accept("labels differ", locus);
    case RemovalReason::ForthFail: {
      if (!r.successor) return StepVerdict::reject("justification_fails", "name the successor without partner", locus);
      auto succ = left.successors(a);
      if (std::find(succ.begin(), succ.end(), *r.successor) == succ.end())
        return StepVerdict::reject("justification_fails", *r.successor + " is not a successor of " + a, locus);
      for (const auto& b2 : right.successors(b))
        if (relation.count({*r.successor, b2}))
          return StepVerdict::reject("justification_fails",
                                     *r.successor + " is still related to the successor " + b2 + " of " + b, locus);
      return StepVerdict::accept("forth condition fails at " + *r.successor, locus);
    }
    case RemovalReason::BackFail: {
      if (!r.successor) return StepVerdict::reject("justification_fails", "name the successor without partner", locus);
      auto succ = right.successors(b);
      if (std::find(succ.begin(), succ.end(), *r.successor) == succ.end())
        return StepVerdict::reject("justification_fails", *r.successor + " is not a successor of " + b, locus);
      for (const auto& a2 : left.successors(a))
        if (relation.count({a2, *r.successor}))
          return StepVerdict::reject("justification_fails",
                                     *r.successor + " is still related to the successor " + a2 + " of " + a, locus);
      return StepVerdict::accept("back condition fails at " + *r.successor, locus);
    }
  }
  return StepVerdict::reject("justification_fails", "unknown justification", locus);
}

StepVerdict BisimulationState::remove(const Removal& r) {
  auto verdict = justify(r);
  if (!verdict.accepted) return verdict;
  relation.erase(r.pair);
  log.push_back(r);
  return verdict;
}

StepVerdict bisim_conclude(const BisimulationState& s, const BisimRelation& claim) {
  if (s.concluded) return StepVerdict::reject("concluded", "the relation is already concluded");
  if (claim != s.relation) return StepVerdict::reject("claim_mismatch", "the claimed relation differs from the current one");
  for (const auto& p : s.relation) {
    bool removable = s.left.label(p.first) != s.right.label(p.second) ||
                     !forth_holds(s.left, s.right, s.relation, p.first, p.second) ||
                     !back_holds(s.left, s.right, s.relation, p.first, p.second);
    if (removable) return StepVerdict::reject("pairs_removable", "this pair can still be removed", pair_locus(p));
  }
  if (s.relation != max_bisimulation(s.left, s.right))
    return StepVerdict::reject("not_maximal", "the relation is not the maximal bisimulation");
  return StepVerdict::accept("maximal bisimulation reached");
}

StepVerdict BisimulationState::conclude(const BisimRelation& claim) {
  auto verdict = bisim_conclude(*this, claim);
  if (verdict.accepted) concluded = true;
  return verdict;
}

std::pair<BisimulationState, StepVerdict> bisim_remove(const BisimulationState& s, const Removal& removal) {
  BisimulationState next = s;
  auto verdict = next.remove(removal);
  if (!verdict.accepted) return {s, verdict};
  return {std::move(next), verdict};
}

}  // namespace logicbench
