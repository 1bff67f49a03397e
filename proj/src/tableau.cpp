#include "logicbench/tableau.hpp"

#include <algorithm>
#include <set>

#include "logicbench/error.hpp"
#include "logicbench/normal_form.hpp"
#include "logicbench/syntax.hpp"

namespace logicbench {

std::string_view to_string(TableauRule rule) {
  switch (rule) {
    case TableauRule::Root: return "root";
    case TableauRule::Alpha: return "alpha";
    case TableauRule::Beta: return "beta";
    case TableauRule::Box: return "box";
    case TableauRule::Diamond: return "diamond";
  }
  return "root";
}

TableauRule tableau_rule_from_string(std::string_view text) {
  if (text == "root") return TableauRule::Root;
  if (text == "alpha") return TableauRule::Alpha;
  if (text == "beta") return TableauRule::Beta;
  if (text == "box") return TableauRule::Box;
  if (text == "diamond") return TableauRule::Diamond;
  throw Error("unknown_rule", "unknown tableau rule '" + std::string(text) + "'");
}

std::string_view to_string(TableauStatus::Kind kind) {
  switch (kind) {
    case TableauStatus::Kind::Incomplete: return "incomplete";
    case TableauStatus::Kind::AllClosed: return "all_closed";
    case TableauStatus::Kind::OpenSaturated: return "open_saturated";
  }
  return "incomplete";
}

namespace {

std::string node_locus(int id) { return "node " + std::to_string(id); }

bool complementary(const Formula& a, const Formula& b) {
  return (a.op() == Op::Not && a.operand() == b) || (b.op() == Op::Not && b.operand() == a);
}

}  // namespace

Tableau Tableau::create(Logic logic, const std::vector<Formula>& roots) {
  if (logic == Logic::FO) throw Error("wrong_logic", "first-order tableaux are not supported");
  if (roots.empty()) throw Error("empty_tableau", "a tableau needs at least one root formula");
  Tableau t;
  t.logic_ = logic;
  int previous = -1;
  for (const auto& f : roots) {
    if (logic == Logic::PL && f.is_modal()) throw Error("wrong_logic", "modal formula in a propositional tableau");
    if (!check_normal_form(f, NormalFormKind::NNF))
      throw Error("not_nnf", "tableau roots must be in negation normal form", render(f));
    TableauNode node{static_cast<int>(t.nodes_.size()), std::nullopt, kRootPrefix, f, TableauRule::Root,
                     std::nullopt};
    if (previous >= 0) node.parent = previous;
    previous = node.id;
    t.nodes_.push_back(std::move(node));
    t.children_.emplace_back();
    if (t.nodes_.back().parent) t.children_[*t.nodes_.back().parent].push_back(previous);
  }
  return t;
}

Tableau Tableau::restore(Logic logic, std::vector<TableauNode> nodes, std::map<int, Closure> closures) {
  Tableau t;
  t.logic_ = logic;
  t.children_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.id != static_cast<int>(i)) throw Error("invalid_tableau", "node ids must be consecutive");
    if (n.parent) {
      if (*n.parent < 0 || *n.parent >= n.id) throw Error("invalid_tableau", "parent must precede its child");
      t.children_[*n.parent].push_back(n.id);
    } else if (n.rule != TableauRule::Root) {
      throw Error("invalid_tableau", "only root nodes lack a parent");
    }
    if (n.premise && (*n.premise < 0 || *n.premise >= n.id))
      throw Error("invalid_tableau", "premise must precede its conclusion");
  }
  t.nodes_ = std::move(nodes);
  for (const auto& [leaf, c] : closures)
    if (leaf < 0 || leaf >= static_cast<int>(t.nodes_.size()) || !t.is_leaf(leaf))
      throw Error("invalid_tableau", "closure on a non-leaf");
  t.closures_ = std::move(closures);
  return t;
}

std::vector<Formula> Tableau::roots() const {
  std::vector<Formula> out;
  for (const auto& n : nodes_)
    if (n.rule == TableauRule::Root) out.push_back(n.formula);
  return out;
}

bool Tableau::is_leaf(int node) const {
  return node >= 0 && node < static_cast<int>(nodes_.size()) && children_[node].empty();
}

std::vector<int> Tableau::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (children_[i].empty()) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Tableau::open_branches() const {
  std::vector<int> out;
  for (int leaf : leaves())
    if (!is_closed(leaf)) out.push_back(leaf);
  return out;
}

std::vector<int> Tableau::path(int leaf) const {
  std::vector<int> out;
  for (std::optional<int> n = leaf; n; n = nodes_[*n].parent) out.push_back(*n);
  std::reverse(out.begin(), out.end());
  return out;
}

bool Tableau::on_branch(int node, int leaf) const {
  if (node < 0 || leaf < 0 || node >= static_cast<int>(nodes_.size()) || leaf >= static_cast<int>(nodes_.size()))
    return false;
  for (std::optional<int> n = leaf; n; n = nodes_[*n].parent)
    if (*n == node) return true;
  return false;
}

std::vector<std::pair<std::string, std::string>> Tableau::accessibility(int leaf) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (int id : path(leaf)) {
    const auto& n = nodes_[id];
    if (n.rule == TableauRule::Diamond) out.emplace_back(nodes_[*n.premise].prefix, n.prefix);
  }
  return out;
}

bool Tableau::applied(int leaf, int premise, TableauRule rule, const std::optional<std::string>& target) const {
  for (std::optional<int> n = leaf; n; n = nodes_[*n].parent) {
    const auto& node = nodes_[*n];
    if (node.rule == rule && node.premise == premise && (!target || node.prefix == *target)) return true;
  }
  return false;
}

int Tableau::append(int parent, std::string prefix, Formula f, TableauRule rule, int premise) {
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(TableauNode{id, parent, std::move(prefix), std::move(f), rule, premise});
  children_.emplace_back();
  children_[parent].push_back(id);
  return id;
}

StepVerdict Tableau::apply(int premise, TableauRule rule, int branch, std::optional<std::string> target_prefix) {
  if (!is_leaf(branch)) return StepVerdict::reject("unknown_branch", "no open branch ends at this node", node_locus(branch));
  if (is_closed(branch)) return StepVerdict::reject("branch_closed", "the branch is already closed", node_locus(branch));
  if (!on_branch(premise, branch))
    return StepVerdict::reject("not_on_branch", "the premise does not lie on the chosen branch", node_locus(premise));
  const TableauNode& p = nodes_[premise];
  const Formula f = p.formula;
  const std::string prefix = p.prefix;
  const std::string locus = node_locus(premise);

  switch (rule) {
    case TableauRule::Alpha: {
      if (f.op() != Op::And) return StepVerdict::reject("rule_mismatch", "the alpha rule expands conjunctions", locus);
      if (applied(branch, premise, rule, std::nullopt))
        return StepVerdict::reject("duplicate_application", "this conjunction is already expanded on the branch", locus);
      int a = append(branch, prefix, f.lhs(), rule, premise);
      append(a, prefix, f.rhs(), rule, premise);
      return StepVerdict::accept("conjunction expanded", locus);
    }
    case TableauRule::Beta: {
      if (f.op() != Op::Or) return StepVerdict::reject("rule_mismatch", "the beta rule splits disjunctions", locus);
      if (applied(branch, premise, rule, std::nullopt))
        return StepVerdict::reject("duplicate_application", "this disjunction is already split on the branch", locus);
      append(branch, prefix, f.lhs(), rule, premise);
      append(branch, prefix, f.rhs(), rule, premise);
      return StepVerdict::accept("branch split", locus);
    }
    case TableauRule::Diamond: {
      if (f.op() != Op::Diamond)
        return StepVerdict::reject("rule_mismatch", "the diamond rule applies to ◇-formulas", locus);
      if (applied(branch, premise, rule, std::nullopt))
        return StepVerdict::reject("duplicate_application", "this ◇-formula already has a witness world", locus);
      std::set<std::string> used;
      for (int id : path(branch)) used.insert(nodes_[id].prefix);
      std::string fresh;
      for (int k = 1;; ++k) {
        fresh = prefix + "." + std::to_string(k);
        if (!used.count(fresh)) break;
      }
      append(branch, fresh, f.operand(), rule, premise);
      return StepVerdict::accept("new world " + fresh, locus);
    }
    case TableauRule::Box: {
      if (f.op() != Op::Box) return StepVerdict::reject("rule_mismatch", "the box rule applies to □-formulas", locus);
      std::vector<std::string> reachable;
      for (const auto& [from, to] : accessibility(branch))
        if (from == prefix) reachable.push_back(to);
      if (reachable.empty())
        return StepVerdict::reject("no_accessible_prefix", "no world is accessible from " + prefix, locus);
      if (!target_prefix) {
        if (reachable.size() != 1)
          return StepVerdict::reject("no_accessible_prefix", "choose the accessible world to propagate to", locus);
        target_prefix = reachable.front();
      }
      if (std::find(reachable.begin(), reachable.end(), *target_prefix) == reachable.end())
        return StepVerdict::reject("no_accessible_prefix", *target_prefix + " is not accessible from " + prefix, locus);
      if (applied(branch, premise, rule, target_prefix))
        return StepVerdict::reject("duplicate_application",
                                   "this □-formula was already propagated to " + *target_prefix, locus);
      append(branch, *target_prefix, f.operand(), rule, premise);
      return StepVerdict::accept("propagated to " + *target_prefix, locus);
    }
    case TableauRule::Root:
      break;
  }
  return StepVerdict::reject("rule_mismatch", "root is not an applicable rule", locus);
}

StepVerdict Tableau::close(int branch, int first, std::optional<int> second) {
  if (!is_leaf(branch)) return StepVerdict::reject("unknown_branch", "no open branch ends at this node", node_locus(branch));
  if (is_closed(branch)) return StepVerdict::reject("branch_closed", "the branch is already closed", node_locus(branch));
  if (!on_branch(first, branch) || (second && !on_branch(*second, branch)))
    return StepVerdict::reject("not_on_branch", "both nodes must lie on the branch", node_locus(first));
  const auto& a = nodes_[first];
  if (!second || a.formula.op() == Op::False) {
    if (a.formula.op() != Op::False)
      return StepVerdict::reject("not_complementary", "a single node closes a branch only if it is ⊥", node_locus(first));
    closures_[branch] = Closure{first, second};
    return StepVerdict::accept("branch closed by ⊥", node_locus(branch));
  }
  const auto& b = nodes_[*second];
  if (b.formula.op() == Op::False) {
    closures_[branch] = Closure{*second, std::nullopt};
    return StepVerdict::accept("branch closed by ⊥", node_locus(branch));
  }
  if (!complementary(a.formula, b.formula))
    return StepVerdict::reject("not_complementary", "the formulas are not complementary",
                               node_locus(first) + "," + std::to_string(*second));
  if (a.prefix != b.prefix)
    return StepVerdict::reject("prefix_mismatch", "complementary formulas must belong to the same world",
                               node_locus(first) + "," + std::to_string(*second));
  closures_[branch] = Closure{first, second};
  return StepVerdict::accept("branch closed", node_locus(branch));
}

std::vector<PendingApplication> Tableau::pending(int leaf) const {
  std::vector<PendingApplication> out;
  if (!is_leaf(leaf) || is_closed(leaf)) return out;
  auto ids = path(leaf);
  auto access = accessibility(leaf);
  std::set<std::pair<int, TableauRule>> done;
  std::set<std::pair<int, std::string>> boxed;
  for (int id : ids) {
    const auto& n = nodes_[id];
    if (!n.premise) continue;
    done.insert({*n.premise, n.rule});
    if (n.rule == TableauRule::Box) boxed.insert({*n.premise, n.prefix});
  }
  for (int id : ids) {
    const auto& f = nodes_[id].formula;
    switch (f.op()) {
      case Op::And:
        if (!done.count({id, TableauRule::Alpha})) out.push_back({id, TableauRule::Alpha, std::nullopt});
        break;
      case Op::Or:
        if (!done.count({id, TableauRule::Beta})) out.push_back({id, TableauRule::Beta, std::nullopt});
        break;
      case Op::Diamond:
        if (!done.count({id, TableauRule::Diamond})) out.push_back({id, TableauRule::Diamond, std::nullopt});
        break;
      case Op::Box:
        for (const auto& [from, to] : access)
          if (from == nodes_[id].prefix && !boxed.count({id, to})) out.push_back({id, TableauRule::Box, to});
        break;
      default:
        break;
    }
  }
  return out;
}

std::optional<Closure> Tableau::find_clash(int leaf) const {
  if (!is_leaf(leaf)) return std::nullopt;
  auto ids = path(leaf);
  // Positions of each prefixed literal along the path.
  std::map<std::pair<std::string, Formula>, std::vector<std::size_t>> seen;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& n = nodes_[ids[i]];
    if (n.formula.is_literal()) seen[{n.prefix, n.formula}].push_back(i);
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& a = nodes_[ids[i]];
    if (a.formula.op() == Op::False) return Closure{a.id, std::nullopt};
    if (!a.formula.is_literal()) continue;
    Formula complement = a.formula.op() == Op::Not ? a.formula.operand() : Formula::negation(a.formula);
    auto it = seen.find({a.prefix, complement});
    if (it == seen.end()) continue;
    auto j = std::upper_bound(it->second.begin(), it->second.end(), i);
    if (j != it->second.end()) return Closure{a.id, ids[*j]};
  }
  return std::nullopt;
}

bool Tableau::saturated(int leaf) const {
  return is_leaf(leaf) && !is_closed(leaf) && !find_clash(leaf) && pending(leaf).empty();
}

TableauStatus Tableau::status() const {
  auto open = open_branches();
  if (open.empty()) return TableauStatus{TableauStatus::Kind::AllClosed, std::nullopt};
  for (int leaf : open)
    if (saturated(leaf)) return TableauStatus{TableauStatus::Kind::OpenSaturated, leaf};
  return TableauStatus{TableauStatus::Kind::Incomplete, std::nullopt};
}

Candidate Tableau::extract_model(int leaf) const {
  if (!saturated(leaf)) throw Error("branch_not_saturated", "the branch is not open and saturated", node_locus(leaf));
  auto ids = path(leaf);
  if (logic_ == Logic::PL) {
    Valuation v;
    for (const auto& r : roots())
      for (const auto& a : atoms(r)) v[a] = false;
    for (int id : ids)
      if (nodes_[id].formula.is_atom()) v[nodes_[id].formula.name()] = true;
    return v;
  }
  KripkeStructure k;
  std::set<std::string> seen;
  for (int id : ids)
    if (seen.insert(nodes_[id].prefix).second) k.worlds.push_back(nodes_[id].prefix);
  for (const auto& edge : accessibility(leaf)) k.edges.insert(edge);
  for (int id : ids)
    if (nodes_[id].formula.is_atom()) k.labels[nodes_[id].prefix].insert(nodes_[id].formula.name());
  k.designated = kRootPrefix;
  return k;
}

std::pair<Tableau, StepVerdict> tableau_apply(const Tableau& t, int premise, TableauRule rule, int branch,
                                              std::optional<std::string> target_prefix) {
  Tableau next = t;
  auto verdict = next.apply(premise, rule, branch, std::move(target_prefix));
  if (!verdict.accepted) return {t, verdict};
  return {std::move(next), verdict};
}

std::pair<Tableau, StepVerdict> tableau_close(const Tableau& t, int branch, int first, std::optional<int> second) {
  Tableau next = t;
  auto verdict = next.close(branch, first, second);
  if (!verdict.accepted) return {t, verdict};
  return {std::move(next), verdict};
}

TableauStatus tableau_status(const Tableau& t) { return t.status(); }

Candidate tableau_extract_model(const Tableau& t, int branch) { return t.extract_model(branch); }

}  // namespace logicbench
