#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "logicbench/formula.hpp"
#include "logicbench/semantics.hpp"
#include "logicbench/verdict.hpp"

namespace logicbench {

enum class TableauRule { Root, Alpha, Beta, Box, Diamond };

std::string_view to_string(TableauRule rule);
TableauRule tableau_rule_from_string(std::string_view text);

// A prefixed formula on the tree. Diamond nodes open the prefix they carry;
// the accessibility pair is (prefix of the premise, prefix of the node).
struct TableauNode {
  int id = 0;
  std::optional<int> parent;
  std::string prefix;
  Formula formula;
  TableauRule rule = TableauRule::Root;
  std::optional<int> premise;

  friend bool operator==(const TableauNode&, const TableauNode&) = default;
};

struct Closure {
  int first = 0;
  std::optional<int> second;  // absent when `first` is ⊥

  friend bool operator==(const Closure&, const Closure&) = default;
};

struct TableauStatus {
  enum class Kind { Incomplete, AllClosed, OpenSaturated };
  Kind kind = Kind::Incomplete;
  std::optional<int> branch;  // the saturated branch for OpenSaturated
};

std::string_view to_string(TableauStatus::Kind kind);

// A rule application that is still available on a branch.
struct PendingApplication {
  int premise = 0;
  TableauRule rule = TableauRule::Alpha;
  std::optional<std::string> target_prefix;
};

// Prefixed tableau over NNF formulas. Branches are named by their leaf node.
// Saturation accounting: α/β once per premise per branch, ◇ once per premise
// per branch, □ once per (premise, accessible prefix).
class Tableau {
 public:
  static constexpr const char* kRootPrefix = "1";

  // Throws Error("not_nnf") unless every root is in NNF, Error("wrong_logic")
  // for modal roots in a PL tableau.
  static Tableau create(Logic logic, const std::vector<Formula>& roots);
  // Rebuilds a tableau from serialized parts, re-checking the structure.
  static Tableau restore(Logic logic, std::vector<TableauNode> nodes, std::map<int, Closure> closures);

  Logic logic() const noexcept { return logic_; }
  const std::vector<TableauNode>& nodes() const noexcept { return nodes_; }
  const std::map<int, Closure>& closures() const noexcept { return closures_; }
  std::vector<Formula> roots() const;

  std::vector<int> leaves() const;
  std::vector<int> open_branches() const;
  bool is_leaf(int node) const;
  bool is_closed(int leaf) const { return closures_.count(leaf) > 0; }
  std::vector<int> path(int leaf) const;  // root first
  bool on_branch(int node, int leaf) const;
  std::vector<std::pair<std::string, std::string>> accessibility(int leaf) const;

  // In-place variants; the state changes only when the verdict is accepted.
  StepVerdict apply(int premise, TableauRule rule, int branch, std::optional<std::string> target_prefix = {});
  StepVerdict close(int branch, int first, std::optional<int> second = {});

  std::vector<PendingApplication> pending(int leaf) const;
  std::optional<Closure> find_clash(int leaf) const;
  bool saturated(int leaf) const;
  TableauStatus status() const;

  // Throws Error("branch_not_saturated") unless `leaf` is open and saturated.
  Candidate extract_model(int leaf) const;

  friend bool operator==(const Tableau&, const Tableau&) = default;

 private:
  bool applied(int leaf, int premise, TableauRule rule, const std::optional<std::string>& target) const;
  int append(int parent, std::string prefix, Formula f, TableauRule rule, int premise);

  Logic logic_ = Logic::PL;
  std::vector<TableauNode> nodes_;
  std::vector<std::vector<int>> children_;
  std::map<int, Closure> closures_;
};

std::pair<Tableau, StepVerdict> tableau_apply(const Tableau& t, int premise, TableauRule rule, int branch,
                                              std::optional<std::string> target_prefix = {});
std::pair<Tableau, StepVerdict> tableau_close(const Tableau& t, int branch, int first,
                                              std::optional<int> second = {});
TableauStatus tableau_status(const Tableau& t);
Candidate tableau_extract_model(const Tableau& t, int branch);

}  // namespace logicbench
