#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "logicbench/fo.hpp"
#include "logicbench/formula.hpp"

namespace logicbench {

using Valuation = std::map<std::string, bool>;

struct TruthTable {
  std::vector<std::string> atoms;
  std::vector<Formula> columns;          // non-atomic subformulas, the formula itself last
  std::vector<std::vector<bool>> rows;   // rows[r][c]; row r encodes the binary number r

  friend bool operator==(const TruthTable&, const TruthTable&) = default;
};

// Valuation of row `row` for `atoms` in binary counting order (first atom = MSB).
Valuation row_valuation(const std::vector<std::string>& atoms, std::size_t row);

using World = std::string;

struct KripkeStructure {
  std::vector<World> worlds;
  std::set<std::pair<World, World>> edges;
  std::map<World, std::set<std::string>> labels;
  std::optional<World> designated;

  bool has_world(const World& w) const;
  std::vector<World> successors(const World& w) const;
  const std::set<std::string>& label(const World& w) const;
  // Throws Error("invalid_structure") when an edge, label or designated world is unknown.
  void validate() const;

  friend bool operator==(const KripkeStructure&, const KripkeStructure&) = default;
};

using Node = int;
using NodeSet = std::set<Node>;

struct ColoredGraph {
  std::vector<Node> nodes;
  std::set<std::pair<Node, Node>> edges;
  std::map<Node, std::set<std::string>> colors;

  bool has_node(Node n) const;
  bool has_color(Node n, const std::string& color) const;
  void validate() const;

  friend bool operator==(const ColoredGraph&, const ColoredGraph&) = default;
};

using Assignment = std::map<std::string, Node>;

struct EvaluationTable {
  std::vector<Formula> formulas;        // distinct subformulas, post-order
  std::vector<World> worlds;
  std::vector<std::vector<bool>> cells; // cells[formula][world]

  friend bool operator==(const EvaluationTable&, const EvaluationTable&) = default;
};

// Throws Error("missing_atom") naming the first unassigned atom.
bool eval_pl(const Formula& f, const Valuation& v);
TruthTable build_truth_table(const Formula& f, const std::vector<std::string>& atom_order);

// Throws Error("unknown_world").
bool eval_ml(const Formula& f, const KripkeStructure& k, const World& w);
EvaluationTable build_evaluation_table(const Formula& f, const KripkeStructure& k);

// Quantifiers range over graph nodes. Throws Error("unassigned_variable").
bool eval_fo(const FoFormula& f, const ColoredGraph& g, const Assignment& a);
// Throws Error("free_variable_count") unless `f` has exactly one free variable.
NodeSet query_nodes(const FoFormula& f, const ColoredGraph& g);

// One node of an evaluation explanation: the value of a subformula at a world
// (ML) and the children that determine it.
struct EvalTrace {
  std::string formula;
  std::optional<World> world;
  bool value = false;
  std::vector<EvalTrace> because;
};

struct ModelVerdict {
  bool satisfies = false;
  EvalTrace trace;  // root of the evaluation, expanded along a deciding path
};

using Candidate = std::variant<Valuation, KripkeStructure, ColoredGraph>;

// PL: valuation; ML: pointed structure (designated world required);
// FO: graph for a sentence. Throws Error("kind_mismatch") otherwise.
ModelVerdict check_model(const Formula& f, const Candidate& candidate);
ModelVerdict check_model(const FoFormula& f, const Candidate& candidate);

}  // namespace logicbench
