#pragma once

// Reference implementations written separately from the engine. They share
// only the data types; every algorithm here is a direct transcription of the
// definitions, favouring obviousness over speed.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logicbench/fo.hpp"
#include "logicbench/formula.hpp"
#include "logicbench/reasoning.hpp"
#include "logicbench/semantics.hpp"

namespace testsupport {

using logicbench::Formula;
using logicbench::KripkeStructure;

// Propositional truth by structural recursion; missing atoms count as false.
bool holds(const Formula& f, const std::map<std::string, bool>& v);
bool tt_satisfiable(const Formula& f);
bool tt_equivalent(const Formula& f, const Formula& g);

// Modal truth at a world by structural recursion.
bool holds_at(const Formula& f, const KripkeStructure& k, const std::string& w);

// Every pointed structure with 1..3 worlds over the given atoms (designated
// world w0), evaluated in one pass per formula.
class SmallKripkeUniverse {
 public:
  explicit SmallKripkeUniverse(std::vector<std::string> atoms);

  std::size_t size() const { return count_; }
  // Index of a structure whose designated world satisfies f.
  std::optional<std::size_t> find_model(const Formula& f) const;
  KripkeStructure structure(std::size_t index) const;

 private:
  std::vector<std::uint8_t> eval(const Formula& f) const;

  std::vector<std::string> atoms_;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> present_;                 // world mask per structure
  std::vector<std::uint16_t> edges_;                  // 9-bit relation per structure
  std::vector<std::vector<std::uint8_t>> atom_mask_;  // per atom, per structure
  std::vector<std::array<std::uint8_t, 8>> box_, diamond_;
};

// Greatest bisimulation as the union of all subsets of W1 x W2 that are
// bisimulations. Exponential; meant for at most 3 x 3 worlds.
logicbench::BisimRelation brute_max_bisimulation(const KripkeStructure& left, const KripkeStructure& right);
bool is_bisimulation(const KripkeStructure& left, const KripkeStructure& right,
                     const logicbench::BisimRelation& relation);

// First-order truth on a colored graph.
bool fo_holds(const logicbench::FoFormula& f, const logicbench::ColoredGraph& g,
              std::map<std::string, int> assignment);

// Term-level substitution and one-way matching: pattern instance of `target`.
logicbench::Term substitute(const logicbench::Term& t, const logicbench::Substitution& s);
logicbench::Literal substitute(const logicbench::Literal& l, const logicbench::Substitution& s);
bool match(const logicbench::Term& pattern, const logicbench::Term& target, logicbench::Substitution& binding);

// Resolvent is a consequence of the parents, by truth tables over the atoms.
bool pl_entails(const std::vector<logicbench::Clause>& premises, const logicbench::Clause& conclusion);

}  // namespace testsupport
