#include "autoplay.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace testsupport {

using namespace logicbench;

namespace {

using Literals = std::set<std::pair<std::string, Formula>>;

Formula complement(const Formula& f) { return f.op() == Op::Not ? f.operand() : Formula::negation(f); }

Literals branch_literals(const Tableau& t, int leaf) {
  Literals out;
  for (int id : t.path(leaf)) {
    const auto& n = t.nodes()[id];
    if (n.formula.is_literal()) out.insert({n.prefix, n.formula});
  }
  return out;
}

// 0: a disjunct closes its branch at once; 1: a disjunct is already on the
// branch; 2: anything else, smaller disjunctions first.
std::pair<int, std::size_t> beta_rank(const Tableau& t, const PendingApplication& p, const Literals& lits) {
  const auto& n = t.nodes()[p.premise];
  auto closes = [&](const Formula& d) {
    return d.op() == Op::False || (d.is_literal() && lits.count({n.prefix, complement(d)}));
  };
  auto present = [&](const Formula& d) { return d.is_literal() && lits.count({n.prefix, d}); };
  const Formula& l = n.formula.lhs();
  const Formula& r = n.formula.rhs();
  if (closes(l) || closes(r)) return {0, 0};
  if (present(l) || present(r)) return {1, 0};
  return {2, n.formula.size()};
}

}  // namespace

AutoplayResult autoplay(Logic logic, const Formula& nnf, int max_steps) {
  AutoplayResult r{Tableau::create(logic, {nnf}), false, std::nullopt, 0};
  Tableau& t = r.tableau;
  // Depth first over an explicit stack of open leaves; stop at the first
  // branch that saturates without a clash.
  std::vector<int> stack = {static_cast<int>(t.nodes().size()) - 1};
  auto count = [&](const StepVerdict& v) {
    if (!v.accepted) throw std::logic_error("auto-player step rejected: " + v.reason + " " + v.message);
    if (++r.steps > max_steps) throw std::logic_error("auto-player exceeded the step budget");
  };
  while (!stack.empty()) {
    int leaf = stack.back();
    stack.pop_back();
    if (auto clash = t.find_clash(leaf)) {
      count(t.close(leaf, clash->first, clash->second));
      continue;
    }
    auto pending = t.pending(leaf);
    if (pending.empty()) {
      r.satisfiable = true;
      r.open_branch = leaf;
      break;
    }
    auto linear = std::find_if(pending.begin(), pending.end(),
                               [](const auto& p) { return p.rule != TableauRule::Beta; });
    if (linear != pending.end()) {
      count(t.apply(linear->premise, linear->rule, leaf, linear->target_prefix));
      stack.push_back(static_cast<int>(t.nodes().size()) - 1);
      continue;
    }
    auto lits = branch_literals(t, leaf);
    auto best = std::min_element(pending.begin(), pending.end(), [&](const auto& a, const auto& b) {
      return beta_rank(t, a, lits) < beta_rank(t, b, lits);
    });
    const Formula lhs = t.nodes()[best->premise].formula.lhs();
    count(t.apply(best->premise, TableauRule::Beta, leaf));
    int left = static_cast<int>(t.nodes().size()) - 2;
    int right = left + 1;
    // Visit the child that repeats a literal already on the branch first: if
    // it is open, the search ends there.
    bool left_repeats = lhs.is_literal() && lits.count({t.nodes()[left].prefix, lhs});
    if (left_repeats) {
      stack.push_back(right);
      stack.push_back(left);
    } else {
      stack.push_back(left);
      stack.push_back(right);
    }
  }
  return r;
}

}  // namespace testsupport
