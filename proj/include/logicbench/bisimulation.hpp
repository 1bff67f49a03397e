#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "logicbench/reasoning.hpp"
#include "logicbench/semantics.hpp"
#include "logicbench/verdict.hpp"

namespace logicbench {

enum class RemovalReason { LabelMismatch, ForthFail, BackFail };

std::string_view to_string(RemovalReason reason);
RemovalReason removal_reason_from_string(std::string_view text);

struct Removal {
  std::pair<World, World> pair;
  RemovalReason reason = RemovalReason::LabelMismatch;
  // Forth: successor of the left world without partner; back: of the right world.
  std::optional<World> successor;

  friend bool operator==(const Removal&, const Removal&) = default;
};

// Refinement run starting from W₁ × W₂.
struct BisimulationState {
  KripkeStructure left;
  KripkeStructure right;
  BisimRelation relation;
  std::vector<Removal> log;
  bool concluded = false;

  static BisimulationState create(const KripkeStructure& left, const KripkeStructure& right);

  // Checks a justification against the current relation without changing it.
  StepVerdict justify(const Removal& removal) const;
  StepVerdict remove(const Removal& removal);
  StepVerdict conclude(const BisimRelation& claim);

  friend bool operator==(const BisimulationState&, const BisimulationState&) = default;
};

std::pair<BisimulationState, StepVerdict> bisim_remove(const BisimulationState& s, const Removal& removal);
StepVerdict bisim_conclude(const BisimulationState& s, const BisimRelation& claim);

}  // namespace logicbench
