#include <gtest/gtest.h>

#include <algorithm>

#include "logicbench/bisimulation.hpp"
#include "logicbench/error.hpp"
#include "logicbench/horn.hpp"
#include "logicbench/normal_form.hpp"
#include "logicbench/reasoning.hpp"
#include "logicbench/resolution.hpp"
#include "logicbench/syntax.hpp"
#include "logicbench/tableau.hpp"
#include "logicbench/tables.hpp"
#include "support/autoplay.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace logicbench;
using namespace testsupport;

namespace {

Formula pl(std::string_view text) { return parse_formula(text, Logic::PL); }
Formula ml(std::string_view text) { return parse_formula(text, Logic::ML); }

}  // namespace

// ---------------------------------------------------------------------------
// Tableau

TEST(Tableau, CreationChecks) {
  try {
    Tableau::create(Logic::PL, {pl("p -> q")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "not_nnf");
  }
  try {
    Tableau::create(Logic::PL, {ml("[]p")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "wrong_logic");
  }
  EXPECT_THROW(Tableau::create(Logic::FO, {pl("p")}), Error);
}

TEST(Tableau, ModalWalkthrough) {
  auto t = Tableau::create(Logic::ML, {ml("<>(A & <>B) & (<>B | []~A)")});
  EXPECT_TRUE(t.apply(0, TableauRule::Alpha, 0).accepted);
  EXPECT_EQ(t.apply(0, TableauRule::Alpha, 2).reason, "duplicate_application");
  EXPECT_EQ(t.apply(1, TableauRule::Beta, 2).reason, "rule_mismatch");
  EXPECT_TRUE(t.apply(2, TableauRule::Beta, 2).accepted);
  EXPECT_EQ(t.open_branches(), (std::vector<int>{3, 4}));
  EXPECT_TRUE(t.apply(1, TableauRule::Diamond, 3).accepted);
  EXPECT_EQ(t.nodes().back().prefix, "1.1");
  // □ needs an accessible world on the branch it is applied to.
  auto before = t;
  auto v = t.apply(4, TableauRule::Box, 4);
  EXPECT_EQ(v.reason, "no_accessible_prefix");
  EXPECT_EQ(t, before);
  EXPECT_EQ(t.status().kind, TableauStatus::Kind::Incomplete);
}

TEST(Tableau, ClosureRequiresComplementsInOneWorld) {
  auto t = Tableau::create(Logic::ML, {ml("<>p & <>~p")});
  ASSERT_TRUE(t.apply(0, TableauRule::Alpha, 0).accepted);
  ASSERT_TRUE(t.apply(1, TableauRule::Diamond, 2).accepted);
  ASSERT_TRUE(t.apply(2, TableauRule::Diamond, 3).accepted);
  EXPECT_EQ(t.nodes()[3].prefix, "1.1");
  EXPECT_EQ(t.nodes()[4].prefix, "1.2");
  EXPECT_EQ(t.close(4, 3, 4).reason, "prefix_mismatch");
  EXPECT_FALSE(t.find_clash(4));
  EXPECT_EQ(t.status().kind, TableauStatus::Kind::OpenSaturated);
  auto model = std::get<KripkeStructure>(t.extract_model(4));
  EXPECT_TRUE(holds_at(ml("<>p & <>~p"), model, "1"));

  auto u = Tableau::create(Logic::PL, {pl("p & ~p")});
  ASSERT_TRUE(u.apply(0, TableauRule::Alpha, 0).accepted);
  EXPECT_EQ(u.close(2, 1, 1).reason, "not_complementary");
  EXPECT_TRUE(u.close(2, 1, 2).accepted);
  EXPECT_EQ(u.status().kind, TableauStatus::Kind::AllClosed);
  EXPECT_THROW(u.extract_model(2), Error);
}

// Random moves, most of them illegal: every rejection leaves the tableau as
// it was, and the value form agrees with the in-place one.
TEST(Tableau, RejectionsDoNotMutate) {
  Gen g(0x7ab1e001);
  const TableauRule rules[] = {TableauRule::Alpha, TableauRule::Beta, TableauRule::Box, TableauRule::Diamond};
  int accepted = 0, rejected = 0;
  for (int i = 0; i < 300; ++i) {
    auto t = Tableau::create(Logic::ML, {to_nnf(random_ml(g, 2, 5, 2))});
    for (int step = 0; step < 40; ++step) {
      int n = static_cast<int>(t.nodes().size());
      int premise = g.uniform(-1, n), branch = g.uniform(-1, n);
      Tableau before = t;
      StepVerdict v;
      if (g.coin(0.2)) {
        int first = g.uniform(0, n - 1), second = g.uniform(0, n - 1);
        auto [next, verdict] = tableau_close(before, branch, first, second);
        auto mutated = before;
        ASSERT_EQ(mutated.close(branch, first, second).accepted, verdict.accepted);
        ASSERT_EQ(mutated, next);
        t = next;
        v = verdict;
      } else {
        auto rule = rules[g.uniform(0, 3)];
        std::optional<std::string> target;
        if (g.coin(0.3)) target = "1." + std::to_string(g.uniform(1, 2));
        auto [next, verdict] = tableau_apply(before, premise, rule, branch, target);
        auto mutated = before;
        auto direct = mutated.apply(premise, rule, branch, target);
        ASSERT_EQ(direct.accepted, verdict.accepted);
        ASSERT_EQ(mutated, next);
        t = next;
        v = verdict;
      }
      if (v.accepted) {
        ++accepted;
      } else {
        ++rejected;
        ASSERT_FALSE(v.reason.empty());
        ASSERT_EQ(t, before);
      }
    }
  }
  EXPECT_GT(accepted, 100);
  EXPECT_GT(rejected, 1000);
}

TEST(Tableau, AutoplayModelsSatisfyTheRoot) {
  Gen g(0x7ab1e002);
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_pl(g, 4, 5);
    auto r = autoplay(Logic::PL, to_nnf(f));
    ASSERT_EQ(r.satisfiable, tt_satisfiable(f)) << render(f);
    if (r.satisfiable) {
      auto v = std::get<Valuation>(r.tableau.extract_model(*r.open_branch));
      ASSERT_TRUE(holds(f, v)) << render(f);
    } else {
      ASSERT_EQ(r.tableau.status().kind, TableauStatus::Kind::AllClosed);
    }
  }
}

// ---------------------------------------------------------------------------
// Horn marking

namespace {

// Plays the marking algorithm through the step interface, firing the first
// applicable clause each time.
HornMarkingState play_marking(HornMarkingState s) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t c = 0; c < s.clauses.size() && !changed; ++c) {
      const auto& clause = s.clauses[c];
      if (clause.conclusion && !s.is_marked(*clause.conclusion) && s.premise_marked(c)) {
        auto v = s.mark(*clause.conclusion, c);
        if (!v.accepted) throw std::logic_error(v.reason);
        changed = true;
      }
    }
  }
  return s;
}

}  // namespace

TEST(Horn, StepwiseMarkingMatchesTheFixpoint) {
  Gen g(0x7ab1e003);
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_implication_form(g, 5, 6);
    auto expected = horn_mark(f);
    ASSERT_EQ(expected.satisfiable, tt_satisfiable(f)) << render(f);
    if (expected.satisfiable) ASSERT_TRUE(holds(f, *expected.witness)) << render(f);

    auto s = play_marking(HornMarkingState::create(f));
    ASSERT_TRUE(s.at_fixpoint());
    std::set<std::string> marked;
    for (const auto& m : s.marks) marked.insert(m.variable);
    std::set<std::string> fixpoint(expected.marked.begin(), expected.marked.end());
    // horn_mark stops once a clause with conclusion 0 fires.
    if (expected.satisfiable)
      ASSERT_EQ(marked, fixpoint) << render(f);
    else
      ASSERT_TRUE(std::includes(marked.begin(), marked.end(), fixpoint.begin(), fixpoint.end())) << render(f);

    auto right = expected.satisfiable ? HornClaim::Satisfiable : HornClaim::Unsatisfiable;
    auto wrong = expected.satisfiable ? HornClaim::Unsatisfiable : HornClaim::Satisfiable;
    auto before = s;
    ASSERT_FALSE(s.conclude(wrong).accepted);
    ASSERT_EQ(s, before);
    ASSERT_TRUE(horn_conclude(s, right).accepted);
    ASSERT_TRUE(s.conclude(right).accepted);
    ASSERT_EQ(s.mark("p", 0).reason, "concluded");
  }
}

TEST(Horn, EveryMarkNeedsAJustification) {
  auto s = HornMarkingState::create(pl("(1 -> s) & (s -> l) & (s & l -> m) & (m -> 0)"));
  auto before = s;
  EXPECT_EQ(s.mark("l", 1).reason, "premise_unsatisfied");
  EXPECT_EQ(s.mark("l", 0).reason, "wrong_conclusion");
  EXPECT_EQ(s.mark("s", 9).reason, "unknown_clause");
  EXPECT_EQ(s.conclude(HornClaim::Satisfiable).reason, "premature_claim");
  EXPECT_EQ(s, before);
  ASSERT_TRUE(s.mark("s", 0).accepted);
  EXPECT_EQ(s.mark("s", 0).reason, "already_marked");
  ASSERT_TRUE(s.mark("l", 1).accepted);
  ASSERT_TRUE(s.mark("m", 2).accepted);
  EXPECT_EQ(s.firing_contradiction(), 3u);
  EXPECT_EQ(s.conclude(HornClaim::Satisfiable).reason, "contradiction_fires");
  EXPECT_TRUE(s.conclude(HornClaim::Unsatisfiable).accepted);
  EXPECT_THROW(HornMarkingState::create(pl("p | q")), Error);
}

// ---------------------------------------------------------------------------
// Unification and resolution

TEST(Unification, Failures) {
  auto lit = [](const char* text) { return parse_literal(text); };
  EXPECT_EQ(unify(lit("P(x)"), lit("Q(x)")).failure, UnifyResult::Failure::PredicateMismatch);
  EXPECT_EQ(unify(lit("P(x)"), lit("P(x, y)")).failure, UnifyResult::Failure::PredicateMismatch);
  EXPECT_EQ(unify(lit("P(f(x))"), lit("P(g(x, y))")).failure, UnifyResult::Failure::Clash);
  EXPECT_EQ(unify(lit("P(x)"), lit("P(f(x))")).failure, UnifyResult::Failure::OccursCheck);
  auto r = unify(lit("P(x, f(y))"), lit("~P(g(z, z), f(x))"));
  ASSERT_TRUE(r.unifiable);
  // Idempotent: applying the MGU twice changes nothing.
  for (const auto& [v, t] : r.mgu) EXPECT_EQ(apply_substitution(t, r.mgu), t);
  EXPECT_EQ(apply_substitution(lit("P(x, f(y))"), r.mgu).args, apply_substitution(lit("P(g(z, z), f(x))"), r.mgu).args);
}

TEST(Resolution, PropositionalSteps) {
  auto g = ResolutionGraph::create(parse_clause_set("{p, q} {~p, r} {~q} {~r}"));
  ASSERT_EQ(g.nodes().size(), 4u);
  int pq = -1, npr = -1, nq = -1, nr = -1;
  for (const auto& n : g.nodes()) {
    if (n.clause == parse_clause("{p, q}")) pq = n.id;
    if (n.clause == parse_clause("{~p, r}")) npr = n.id;
    if (n.clause == parse_clause("{~q}")) nq = n.id;
    if (n.clause == parse_clause("{~r}")) nr = n.id;
  }
  auto before = g;
  EXPECT_EQ(g.resolve_pl(pq, npr, parse_literal("p"), parse_clause("{q}")).reason, "resolvent_mismatch");
  EXPECT_EQ(g.resolve_pl(pq, npr, parse_literal("r"), parse_clause("{q, r}")).reason, "pivot_absent");
  EXPECT_EQ(g.resolve_pl(pq, 17, parse_literal("p"), parse_clause("{q, r}")).reason, "unknown_parent");
  EXPECT_EQ(g, before);
  ASSERT_TRUE(g.resolve_pl(pq, npr, parse_literal("p"), parse_clause("{q, r}")).accepted);
  ASSERT_TRUE(g.resolve_pl(4, nq, parse_literal("q"), parse_clause("{r}")).accepted);
  EXPECT_FALSE(g.derived_empty_clause());
  ASSERT_TRUE(g.resolve_pl(5, nr, parse_literal("r"), parse_clause("{}")).accepted);
  EXPECT_EQ(g.empty_clause(), 6);
  EXPECT_EQ(ResolutionGraph::restore(g.nodes(), false), g);
}

TEST(Resolution, RandomStepsAreSoundAndRejectionsInert) {
  Gen g(0x7ab1e004);
  auto names = atom_names(4);
  int accepted = 0;
  for (int i = 0; i < 300; ++i) {
    ClauseSet inputs;
    int n = g.uniform(2, 6);
    for (int c = 0; c < n; ++c) {
      Clause clause;
      int k = g.uniform(1, 3);
      for (int j = 0; j < k; ++j) clause.insert(Literal{g.coin(), g.pick(names), {}});
      inputs.insert(clause);
    }
    auto graph = ResolutionGraph::create(inputs);
    for (int step = 0; step < 30; ++step) {
      int size = static_cast<int>(graph.nodes().size());
      int a = g.uniform(0, size - 1), b = g.uniform(0, size - 1);
      const auto& ca = graph.node(a).clause;
      if (ca.empty()) continue;
      Literal pivot = *std::next(ca.begin(), g.uniform(0, static_cast<int>(ca.size()) - 1));
      Clause right = resolvent(ca, graph.node(b).clause, pivot);
      Clause claimed = right;
      if (g.coin(0.3)) claimed.insert(Literal{g.coin(), g.pick(names), {}});
      auto before = graph;
      auto [next, v] = resolve_pl(before, a, b, pivot, claimed);
      bool legal = graph.node(b).clause.count(pivot.complement()) && claimed == right;
      ASSERT_EQ(v.accepted, legal);
      if (v.accepted) {
        ++accepted;
        ASSERT_TRUE(pl_entails({ca, graph.node(b).clause}, claimed));
        graph = next;
      } else {
        ASSERT_EQ(next, before);
      }
    }
  }
  EXPECT_GT(accepted, 200);
}

TEST(Resolution, FirstOrderStep) {
  auto g = ResolutionGraph::create(parse_clause_set("{P(x), Q(x)} {~P(f(x))}"));
  int left = g.node(0).clause.size() == 2 ? 0 : 1, right = 1 - left;
  Substitution s1{{"x", parse_term("f(y)")}}, s2{{"x", parse_term("y")}};
  auto before = g;
  EXPECT_EQ(g.resolve_fo(left, s1, right, {}, parse_literal("P(x)"), parse_literal("~P(f(x))"),
                         parse_clause("{Q(f(y))}"))
                .reason,
            "not_complementary");
  EXPECT_EQ(g.resolve_fo(left, s1, right, s2, parse_literal("P(x)"), parse_literal("~P(f(x))"),
                         parse_clause("{Q(y)}"))
                .reason,
            "resolvent_mismatch");
  EXPECT_EQ(g, before);
  ASSERT_TRUE(g.resolve_fo(left, s1, right, s2, parse_literal("P(x)"), parse_literal("~P(f(x))"),
                           parse_clause("{Q(f(y))}"))
                  .accepted);
  EXPECT_EQ(ResolutionGraph::restore(g.nodes(), true), g);
}

// ---------------------------------------------------------------------------
// Bisimulation

namespace {

std::vector<Removal> candidate_removals(const BisimulationState& s) {
  std::vector<Removal> out;
  for (const auto& pair : s.relation) {
    out.push_back({pair, RemovalReason::LabelMismatch, std::nullopt});
    for (const auto& w : s.left.successors(pair.first)) out.push_back({pair, RemovalReason::ForthFail, w});
    for (const auto& w : s.right.successors(pair.second)) out.push_back({pair, RemovalReason::BackFail, w});
  }
  return out;
}

}  // namespace

TEST(Bisimulation, RefinementReachesTheGreatestBisimulation) {
  Gen g(0x7ab1e005);
  for (int i = 0; i < 500; ++i) {
    auto left = random_kripke(g, g.uniform(1, 3), 1, "a");
    auto right = random_kripke(g, g.uniform(1, 3), 1, "b");
    auto greatest = brute_max_bisimulation(left, right);
    ASSERT_EQ(max_bisimulation(left, right), greatest);
    auto s = BisimulationState::create(left, right);
    ASSERT_EQ(s.relation.size(), left.worlds.size() * right.worlds.size());
    for (bool progress = true; progress;) {
      progress = false;
      for (const auto& r : candidate_removals(s)) {
        auto v = s.justify(r);
        if (greatest.count(r.pair)) {
          // Pairs of the greatest bisimulation are never removable.
          ASSERT_FALSE(v.accepted) << r.pair.first << "," << r.pair.second;
          continue;
        }
        if (!v.accepted) continue;
        auto [next, verdict] = bisim_remove(s, r);
        ASSERT_TRUE(verdict.accepted);
        s = next;
        progress = true;
        break;
      }
    }
    ASSERT_EQ(s.relation, greatest);
    ASSERT_TRUE(is_bisimulation(left, right, s.relation));
    if (!greatest.empty()) {
      auto smaller = greatest;
      smaller.erase(smaller.begin());
      ASSERT_FALSE(bisim_conclude(s, smaller).accepted);
    }
    ASSERT_TRUE(s.conclude(greatest).accepted);
    ASSERT_EQ(s.conclude(greatest).reason, "concluded");
  }
}

TEST(Bisimulation, PrematureConclusion) {
  KripkeStructure left, right;
  left.worlds = {"a0", "a1"};
  left.edges = {{"a0", "a1"}};
  left.labels["a1"] = {"p"};
  right.worlds = {"b0"};
  auto s = BisimulationState::create(left, right);
  auto v = s.conclude(s.relation);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.reason, "pairs_removable");
  EXPECT_EQ(s.remove({{"a0", "b0"}, RemovalReason::LabelMismatch, std::nullopt}).reason, "justification_fails");
  EXPECT_TRUE(s.remove({{"a0", "b0"}, RemovalReason::ForthFail, "a1"}).accepted);
  EXPECT_EQ(s.remove({{"a0", "b0"}, RemovalReason::ForthFail, "a1"}).reason, "pair_absent");
  EXPECT_TRUE(distinguishes(parse_formula("<>p", Logic::ML), left, "a0", right, "b0"));
  EXPECT_FALSE(distinguishes(parse_formula("[]p", Logic::ML), left, "a1", right, "b0"));
}

// ---------------------------------------------------------------------------
// Tables

TEST(Tables, TruthTableCellChecks) {
  Gen g(0x7ab1e006);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_pl(g, 3, 4);
    auto names = atoms(f);
    std::vector<std::string> order(names.begin(), names.end());
    if (order.empty()) continue;
    auto table = build_truth_table(f, order);
    ASSERT_TRUE(truth_table_check(f, table).all_correct());
    auto broken = table;
    std::size_t r = static_cast<std::size_t>(g.uniform(0, static_cast<int>(broken.rows.size()) - 1));
    std::size_t c = static_cast<std::size_t>(g.uniform(0, static_cast<int>(broken.columns.size()) - 1));
    broken.rows[r][c] = !broken.rows[r][c];
    auto check = truth_table_check(f, broken);
    ASSERT_EQ(check.wrong, 1u);
    ASSERT_FALSE(check.cells[r][c].accepted);
  }
  auto short_table = build_truth_table(pl("p & q"), {"p", "q"});
  short_table.rows.pop_back();
  try {
    truth_table_check(pl("p & q"), short_table);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "shape_mismatch");
  }
}

TEST(Tables, EvaluationTableCellChecks) {
  Gen g(0x7ab1e007);
  for (int i = 0; i < 200; ++i) {
    Formula f = random_ml(g, 2, 4, 2);
    auto k = random_kripke(g, g.uniform(1, 3), 2, "w");
    auto table = build_evaluation_table(f, k);
    ASSERT_TRUE(evaluation_table_check(f, k, table).all_correct());
    table.cells[0][0] = !table.cells[0][0];
    ASSERT_EQ(evaluation_table_check(f, k, table).wrong, 1u);
  }
}
