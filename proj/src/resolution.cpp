#include "logicbench/resolution.hpp"

#include "logicbench/error.hpp"
#include "logicbench/syntax.hpp"

namespace logicbench {

std::string_view to_string(UnifyResult::Failure failure) {
  switch (failure) {
    case UnifyResult::Failure::None: return "none";
    case UnifyResult::Failure::PredicateMismatch: return "predicate_mismatch";
    case UnifyResult::Failure::Clash: return "clash";
    case UnifyResult::Failure::OccursCheck: return "occurs_check";
  }
  return "none";
}

namespace {

// Binds `var` to `t` in an idempotent substitution: earlier bindings are
// rewritten with the new one.
void bind(Substitution& s, const std::string& var, const Term& t) {
  Substitution single{{var, t}};
  for (auto& [v, term] : s) term = apply_substitution(term, single);
  s.emplace(var, t);
}

UnifyResult unify_pairs(std::vector<std::pair<Term, Term>> work) {
  UnifyResult result;
  Substitution& s = result.mgu;
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    a = apply_substitution(a, s);
    b = apply_substitution(b, s);
    if (a == b) continue;
    if (!a.is_variable() && b.is_variable()) std::swap(a, b);
    if (a.is_variable()) {
      if (b.contains_variable(a.name)) {
        result.failure = UnifyResult::Failure::OccursCheck;
        result.mgu.clear();
        return result;
      }
      bind(s, a.name, b);
      continue;
    }
    if (a.name != b.name || a.args.size() != b.args.size()) {
      result.failure = UnifyResult::Failure::Clash;
      result.mgu.clear();
      return result;
    }
    for (std::size_t i = a.args.size(); i-- > 0;) work.emplace_back(a.args[i], b.args[i]);
  }
  result.unifiable = true;
  return result;
}

std::string pair_locus(int a, int b) { return "nodes " + std::to_string(a) + "," + std::to_string(b); }

}  // namespace

UnifyResult unify(const Term& a, const Term& b) { return unify_pairs({{a, b}}); }

UnifyResult unify(const Literal& a, const Literal& b) {
  if (a.predicate != b.predicate || a.args.size() != b.args.size()) {
    UnifyResult r;
    r.failure = UnifyResult::Failure::PredicateMismatch;
    return r;
  }
  std::vector<std::pair<Term, Term>> work;
  for (std::size_t i = a.args.size(); i-- > 0;) work.emplace_back(a.args[i], b.args[i]);
  return unify_pairs(std::move(work));
}

Clause resolvent(const Clause& first, const Clause& second, const Literal& pivot) {
  Clause out;
  for (const auto& l : first)
    if (l != pivot) out.insert(l);
  const Literal neg = pivot.complement();
  for (const auto& l : second)
    if (l != neg) out.insert(l);
  return out;
}

ResolutionGraph ResolutionGraph::create(const ClauseSet& inputs) {
  ResolutionGraph g;
  for (const auto& c : inputs) g.nodes_.push_back(ResolutionNode{static_cast<int>(g.nodes_.size()), c, {}, {}, {}, {}});
  return g;
}

ResolutionGraph ResolutionGraph::restore(std::vector<ResolutionNode> nodes, bool first_order) {
  ResolutionGraph g;
  for (auto& n : nodes) {
    if (n.id != static_cast<int>(g.nodes_.size())) throw Error("invalid_graph", "node ids must be consecutive");
    if (!n.parents) {
      g.nodes_.push_back(std::move(n));
      continue;
    }
    if (!n.pivot) throw Error("invalid_graph", "derived node without pivot", std::to_string(n.id));
    auto [a, b] = *n.parents;
    auto verdict = first_order
                       ? g.resolve_fo(a, n.left_substitution, b, n.right_substitution, n.pivot->first,
                                      n.pivot->second, n.clause)
                       : g.resolve_pl(a, b, n.pivot->first, n.clause);
    if (!verdict.accepted) throw Error("invalid_graph", verdict.message, std::to_string(n.id));
  }
  return g;
}

std::optional<int> ResolutionGraph::empty_clause() const {
  for (const auto& n : nodes_)
    if (n.clause.empty()) return n.id;
  return std::nullopt;
}

StepVerdict ResolutionGraph::resolve_pl(int first, int second, const Literal& pivot, const Clause& claimed) {
  if (!has_node(first) || !has_node(second))
    return StepVerdict::reject("unknown_parent", "both parents must be existing clauses", pair_locus(first, second));
  const Clause& c1 = nodes_[first].clause;
  const Clause& c2 = nodes_[second].clause;
  if (!c1.count(pivot))
    return StepVerdict::reject("pivot_absent", render(pivot) + " does not occur in " + render(c1),
                               "node " + std::to_string(first));
  if (!c2.count(pivot.complement()))
    return StepVerdict::reject("pivot_absent", render(pivot.complement()) + " does not occur in " + render(c2),
                               "node " + std::to_string(second));
  Clause expected = resolvent(c1, c2, pivot);
  if (expected != claimed)
    return StepVerdict::reject("resolvent_mismatch", render(claimed) + " is not the resolvent of the two clauses",
                               pair_locus(first, second), render(expected));
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(ResolutionNode{id, expected, std::pair{first, second}, std::pair{pivot, pivot.complement()}, {}, {}});
  return StepVerdict::accept(expected.empty() ? "empty clause derived" : "resolvent " + render(expected) + " added",
                             "node " + std::to_string(id));
}

StepVerdict ResolutionGraph::resolve_fo(int first, const Substitution& first_subst, int second,
                                        const Substitution& second_subst, const Literal& first_pivot,
                                        const Literal& second_pivot, const Clause& claimed) {
  if (!has_node(first) || !has_node(second))
    return StepVerdict::reject("unknown_parent", "both parents must be existing clauses", pair_locus(first, second));
  const Clause& c1 = nodes_[first].clause;
  const Clause& c2 = nodes_[second].clause;
  if (!c1.count(first_pivot))
    return StepVerdict::reject("pivot_absent", render(first_pivot) + " does not occur in " + render(c1),
                               "node " + std::to_string(first));
  if (!c2.count(second_pivot))
    return StepVerdict::reject("pivot_absent", render(second_pivot) + " does not occur in " + render(c2),
                               "node " + std::to_string(second));
  Clause i1 = apply_substitution(c1, first_subst);
  Clause i2 = apply_substitution(c2, second_subst);
  Literal l1 = apply_substitution(first_pivot, first_subst);
  Literal l2 = apply_substitution(second_pivot, second_subst);
  if (l1.complement() != l2)
    return StepVerdict::reject("not_complementary",
                               render(l1) + " and " + render(l2) + " are not complementary after substitution",
                               pair_locus(first, second));
  Clause expected = resolvent(i1, i2, l1);
  if (expected != claimed)
    return StepVerdict::reject("resolvent_mismatch", render(claimed) + " is not the resolvent of the two clauses",
                               pair_locus(first, second), render(expected));
  int id = static_cast<int>(nodes_.size());
  nodes_.push_back(ResolutionNode{id, expected, std::pair{first, second}, std::pair{first_pivot, second_pivot},
                                  first_subst, second_subst});
  return StepVerdict::accept(expected.empty() ? "empty clause derived" : "resolvent " + render(expected) + " added",
                             "node " + std::to_string(id));
}

std::pair<ResolutionGraph, StepVerdict> resolve_pl(const ResolutionGraph& g, int first, int second,
                                                   const Literal& pivot, const Clause& claimed) {
  ResolutionGraph next = g;
  auto v = next.resolve_pl(first, second, pivot, claimed);
  if (!v.accepted) return {g, v};
  return {std::move(next), v};
}

std::pair<ResolutionGraph, StepVerdict> resolve_fo(const ResolutionGraph& g, int first, const Substitution& s1,
                                                   int second, const Substitution& s2,
                                                   const std::pair<Literal, Literal>& pivots, const Clause& claimed) {
  ResolutionGraph next = g;
  auto v = next.resolve_fo(first, s1, second, s2, pivots.first, pivots.second, claimed);
  if (!v.accepted) return {g, v};
  return {std::move(next), v};
}

}  // namespace logicbench
