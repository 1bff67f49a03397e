// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "logicbench/error.hpp"
#include "logicbench/exercise.hpp"
#include "logicbench/reasoning.hpp"
#include "logicbench/service.hpp"
#include "logicbench/syntax.hpp"
#include "support/autoplay.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/process.hpp"

using namespace logicbench;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = LOGICBENCH_SOURCE_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects failed checks of one criterion.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& text) { notes.push_back(text); }
};

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

ExerciseSpec fixture(const std::string& name) { return load_exercise(read_json(kSource / "fixtures/exercises" / (name + ".json"))); }
Json submissions(const std::string& name) { return read_json(kSource / "fixtures/submissions" / (name + ".json")); }

// ---------------------------------------------------------------------------

void modal_workflow(Check& c) {
  auto t0 = Clock::now();
  ExerciseSpec spec = fixture("modal_branching");
  c.expect(validate_exercise(spec).empty(), "fixture validates");
  SessionState s = start_session(spec, "acceptance");
  c.expect(s.current == "nnf", "session starts at the NNF task");
  Formula phi = s.progress.at("nnf").inputs.at("formula").as<Formula>();
  c.expect(phi == parse_formula("~[](~A | ~<>B) & (<>B | ~<>A)", Logic::ML), "bound instructor formula");

  auto r = submit(spec, s, Json{{"kind", "formula"}, {"value", "◇(A∧◇B)∧(◇B∨□¬A)"}});
  c.expect(r.accepted && r.transition.type == Transition::Type::Advance && r.transition.task == "tableau",
           "NNF accepted, advance to tableau");

  Json script = submissions("modal_branching");
  for (std::size_t i = 1; i < script.size() && s.current == "tableau"; ++i) {
    r = submit(spec, s, script[i]);
    c.expect(r.accepted, "tableau step " + std::to_string(i) + " accepted");
  }
  const auto& tab = std::get<Tableau>(*s.progress.at("tableau").proof);
  c.expect(tab.status().kind == TableauStatus::Kind::OpenSaturated, "tableau open_saturated");
  c.expect(s.environment.at("tableau.satisfiable").as<bool>(), "tableau output satisfiable");

  r = submit(spec, s, Json{{"kind", "choice"}, {"value", 0}});
  c.expect(r.accepted && r.transition.task == "model", "'satisfiable' branches to the model task");

  KripkeStructure k;
  k.worlds = {"w", "u", "v"};
  k.edges = {{"w", "u"}, {"u", "v"}, {"w", "v"}};
  k.labels = {{"u", {"A"}}, {"v", {"B"}}};
  k.designated = "w";
  r = submit(spec, s, Json{{"kind", "kripke"}, {"value", encode(k)}});
  c.expect(r.accepted && s.status == SessionStatus::Finished, "three-world model accepted, session finished");
  Formula nnf = parse_formula("<>(A & <>B) & (<>B | []~A)", Logic::ML);
  c.expect(check_model(nnf, k).satisfies && holds_at(nnf, k, "w") && holds_at(phi, k, "w"),
           "model verified by check_model and the reference evaluator");

  double elapsed = seconds_since(t0);
  c.expect(elapsed < 1.0, "run under 1 s");
  c.note(std::to_string(elapsed) + " s");
}

void horn_workflow(Check& c) {
  ExerciseSpec spec = fixture("horn_chain");
  c.expect(validate_exercise(spec).empty(), "fixture validates");
  Json script = submissions("horn_chain");
  SessionState s = start_session(spec, "acceptance");
  std::vector<std::string> visited;
  int accepted = 0;
  for (const auto& sub : script) {
    visited.push_back(s.current);
    auto r = submit(spec, s, sub);
    accepted += r.accepted;
  }
  c.expect(accepted == static_cast<int>(script.size()), "all reference submissions accepted");
  c.expect(s.status == SessionStatus::Finished, "session finished");
  std::vector<std::string> chain;
  for (const auto& t : visited)
    if (chain.empty() || chain.back() != t) chain.push_back(t);
  c.expect(chain == std::vector<std::string>{"intro", "scenario", "consequence", "method", "implication_form",
                                             "marking", "verdict"},
           "task chain");
  c.expect(render(s.environment.at("implication_form.formula").as<Formula>()) ==
               "(1 -> s) & (s -> l) & (s & l -> m) & (m -> 0)",
           "implication form bound");
  c.expect(!s.environment.at("marking.satisfiable").as<bool>(), "HornSat concludes unsatisfiable");

  // Seeded wrong step: mark m by its clause before l is marked.
  SessionState t = start_session(spec, "acceptance");
  for (int i = 0; i < 6; ++i) submit(spec, t, script[i]);  // through "mark s"
  SessionState before = t;
  auto r = submit(spec, t, Json{{"step", {{"mark", {{"variable", "m"}, {"clause", 2}}}}}});
  c.expect(!r.accepted && r.transition.type == Transition::Type::Stay, "wrong marking step rejected");
  c.expect(!r.feedback.empty() && r.feedback.front().payload.value("reason", "") == "premise_unsatisfied",
           "rejection names the unmarked premise");
  c.expect(t.current == before.current && t.environment == before.environment &&
               std::get<HornMarkingState>(*t.progress.at("marking").proof) ==
                   std::get<HornMarkingState>(*before.progress.at("marking").proof),
           "rejection leaves the marking state unchanged");
  for (std::size_t i = 6; i < script.size(); ++i) submit(spec, t, script[i]);
  c.expect(t.status == SessionStatus::Finished, "run completes after the rejected step");
}

void oracle_suites(Check& c) {
  constexpr int kCases = 10000;
  auto t0 = Clock::now();

  {
    Gen g(0x5eed0001);
    int mismatches = 0;
    for (int i = 0; i < kCases; ++i) {
      Formula f = random_pl(g, g.uniform(1, 4), g.uniform(1, 5));
      auto r = pl_satisfiable(f);
      bool ok = r.satisfiable == tt_satisfiable(f) && (!r.satisfiable || (r.valuation && holds(f, *r.valuation)));
      mismatches += !ok;
    }
    c.expect(mismatches == 0, "pl_satisfiable vs truth tables: " + std::to_string(mismatches) + " mismatches");
    c.note("pl_sat " + std::to_string(kCases));
  }
  {
    Gen g(0x5eed0002);
    int mismatches = 0, unsat = 0;
    for (int i = 0; i < kCases; ++i) {
      Formula f = random_implication_form(g, 6, 10);
      auto h = horn_mark(f);
      bool ok = h.satisfiable == pl_satisfiable(f).satisfiable && h.satisfiable == tt_satisfiable(f);
      if (h.satisfiable) ok = ok && h.witness && holds(f, *h.witness);
      mismatches += !ok;
      unsat += !h.satisfiable;
    }
    c.expect(mismatches == 0, "horn_mark vs pl_satisfiable: " + std::to_string(mismatches) + " mismatches");
    c.note("horn " + std::to_string(kCases) + " (" + std::to_string(unsat) + " unsat)");
  }
  {
    Gen g(0x5eed0003);
    int mismatches = 0;
    for (int i = 0; i < kCases; ++i) {
      Formula f = random_pl(g, g.uniform(1, 4), g.uniform(1, 5));
      auto play = autoplay(Logic::PL, to_nnf(f));
      bool ok = play.satisfiable == pl_satisfiable(f).satisfiable && play.satisfiable == tt_satisfiable(f);
      if (play.satisfiable) {
        auto model = play.tableau.extract_model(*play.open_branch);
        ok = ok && holds(f, std::get<Valuation>(model));
      }
      mismatches += !ok;
    }
    c.expect(mismatches == 0, "PL tableau auto-player vs pl_satisfiable: " + std::to_string(mismatches) + " mismatches");
    c.note("tableau_pl " + std::to_string(kCases));
  }
  {
    Gen g(0x5eed0004);
    SmallKripkeUniverse universe({"p", "q"});
    int mismatches = 0, sat = 0, small = 0;
    for (int i = 0; i < kCases; ++i) {
      Formula f = random_ml(g, 2, g.uniform(1, 5), 2);
      auto play = autoplay(Logic::ML, to_nnf(f));
      bool oracle = ml_satisfiable(f).satisfiable;
      auto brute = universe.find_model(f);
      bool ok = play.satisfiable == oracle;
      if (brute) ok = ok && oracle && holds_at(f, universe.structure(*brute), "w0");
      if (play.satisfiable) {
        auto k = std::get<KripkeStructure>(play.tableau.extract_model(*play.open_branch));
        ok = ok && holds_at(f, k, *k.designated);
      }
      mismatches += !ok;
      sat += play.satisfiable;
      small += brute.has_value();
    }
    c.expect(mismatches == 0, "ML tableau auto-player vs ml_satisfiable and Kripke enumeration: " +
                                  std::to_string(mismatches) + " mismatches");
    c.note("tableau_ml " + std::to_string(kCases) + " (" + std::to_string(sat) + " sat, " + std::to_string(small) +
           " with a model of at most 3 worlds)");
  }
  {
    Gen g(0x5eed0005);
    int mismatches = 0, nonempty = 0;
    for (int i = 0; i < kCases; ++i) {
      auto left = random_kripke(g, g.uniform(1, 3), g.uniform(0, 2), "a", 0.5);
      auto right = random_kripke(g, g.uniform(1, 3), g.uniform(0, 2), "b", 0.5);
      auto mine = max_bisimulation(left, right);
      mismatches += mine != brute_max_bisimulation(left, right);
      nonempty += !mine.empty();
    }
    c.expect(mismatches == 0, "max_bisimulation vs brute force: " + std::to_string(mismatches) + " mismatches");
    c.note("bisim " + std::to_string(kCases) + " (" + std::to_string(nonempty) + " non-empty)");
  }

  double elapsed = seconds_since(t0);
  c.expect(elapsed < 60.0, "suites under 60 s");
  c.note(std::to_string(elapsed) + " s");
}

// Variables of the unification universe.
const std::vector<std::string> kVars = {"x", "y", "z"};

// A ground instance of `pattern` and a second literal that generalises it,
// so the pair has a common instance.
std::pair<Literal, Literal> unifiable_pair(Gen& g, const std::vector<Term>& universe) {
  Literal l1{true, "P", {random_term(g, 2, kVars), random_term(g, 2, kVars)}};
  Substitution ground;
  for (const auto& v : kVars) ground[v] = g.pick(universe);
  Literal inst = substitute(l1, ground);
  // A subterm is replaced only by a variable the ground substitution maps to
  // it, so `ground` unifies the pair.
  std::function<Term(const Term&, int)> abstract = [&](const Term& t, int depth) -> Term {
    std::vector<std::string> fits;
    for (const auto& v : kVars)
      if (ground.at(v) == t) fits.push_back(v);
    if (!fits.empty() && g.coin(depth == 0 ? 0.5 : 0.6)) return Term::variable(g.pick(fits));
    Term out = t;
    for (auto& a : out.args) a = abstract(a, depth + 1);
    return out;
  };
  Literal l2{false, "P", {}};
  for (const auto& a : inst.args) l2.args.push_back(abstract(a, 0));
  return {l1, l2};
}

void unification(Check& c) {
  Gen g(0x5eed0006);
  const auto universe = ground_terms(1);
  int pairs = 0, equalize_fail = 0, factor_fail = 0, unifiers_checked = 0;
  while (pairs < 1000) {
    auto [l1, l2] = unifiable_pair(g, universe);
    auto r = unify(l1, l2);
    ++pairs;
    if (!r.unifiable) {
      ++equalize_fail;
      continue;
    }
    Literal a = substitute(l1, r.mgu), b = substitute(l2, r.mgu);
    a.positive = b.positive = true;
    equalize_fail += !(a == b);
    // Every unifier from the enumerated universe is an instance of the MGU.
    for (const auto& tx : universe)
      for (const auto& ty : universe)
        for (const auto& tz : universe) {
          Substitution sigma{{"x", tx}, {"y", ty}, {"z", tz}};
          Literal s1 = substitute(l1, sigma), s2 = substitute(l2, sigma);
          if (s1.args != s2.args) continue;
          ++unifiers_checked;
          Substitution lambda;
          bool factors = true;
          for (const auto& v : kVars) {
            Term through = r.mgu.count(v) ? r.mgu.at(v) : Term::variable(v);
            factors = factors && match(through, sigma.at(v), lambda);
          }
          factor_fail += !factors;
        }
  }
  c.expect(equalize_fail == 0, "MGU equalizes: " + std::to_string(equalize_fail) + " failures");
  c.expect(factor_fail == 0, "unifiers factor through the MGU: " + std::to_string(factor_fail) + " failures");
  c.expect(unifiers_checked > 1000, "enough unifiers enumerated");

  int occurs_fail = 0;
  for (int i = 0; i < 200; ++i) {
    std::string v = g.pick(kVars);
    Term inner = random_term(g, 2, kVars);
    // Wrap so that v occurs strictly inside.
    Term host = g.coin() ? Term::function("f", {Term::variable(v)}) : Term::function("g", {inner, Term::variable(v)});
    if (g.coin()) host = Term::function("f", {host});
    Literal l1{true, "Q", {Term::variable(v)}};
    Literal l2{false, "Q", {host}};
    auto r = unify(l1, l2);
    occurs_fail += r.unifiable || r.failure != UnifyResult::Failure::OccursCheck;
  }
  c.expect(occurs_fail == 0, "occurs-check cases rejected: " + std::to_string(occurs_fail) + " failures");
  c.note(std::to_string(pairs) + " pairs, " + std::to_string(unifiers_checked) + " enumerated unifiers, 200 occurs-check cases");
}

std::vector<std::string> generators_of(const std::vector<FeedbackItem>& items) {
  std::vector<std::string> out;
  for (const auto& i : items) out.push_back(i.generator);
  return out;
}

void feedback_conformance(Check& c) {
  FeedbackContext pl;
  pl.task = "construct_formula";
  pl.logic = Logic::PL;
  pl.student_formula = parse_formula("s -> m", Logic::PL);
  pl.target_formula = parse_formula("m -> s", Logic::PL);
  auto items = run_strategy(builtin_strategy("pl_construction"), pl);
  c.expect(generators_of(items) == std::vector<std::string>{"correctness", "misconception_hint", "misconception_explicit",
                                                            "misconception_position", "distinguishing_model"},
           "PL strategy generator order");
  for (std::size_t i = 0; i < items.size(); ++i) c.expect(items[i].rank == static_cast<int>(i), "gapless ranks");
  if (items.size() == 5) {
    c.expect(items[1].payload.value("rule", "") == "implication_swap", "misconception identified as implication swap");
    const Json& w = items[4].payload;
    Valuation v = decode_valuation(w["value"]);
    bool sv = holds(*pl.student_formula, v), tv = holds(*pl.target_formula, v);
    c.expect(sv != tv && sv == w["student"].get<bool>() && tv == w["target"].get<bool>(),
             "PL distinguishing valuation re-verifies");
  }

  ColoredGraph graph;
  graph.nodes = {1, 2, 3};
  graph.edges = {{1, 2}, {2, 3}};
  graph.colors = {{1, {"red"}}, {2, {"blue"}}};
  FoFormula student = parse_fo_formula("red(x)");
  FoFormula target = parse_fo_formula("red(x) | blue(x)");
  FeedbackContext fo;
  fo.task = "fo_query";
  fo.logic = Logic::FO;
  fo.student_nodes = query_nodes(student, graph);
  fo.correct_nodes = query_nodes(target, graph);
  fo.graph = graph;
  c.expect(*fo.student_nodes == NodeSet{1} && *fo.correct_nodes == NodeSet{1, 2}, "query nodes {1} and {1,2}");
  auto fo_items = run_strategy(builtin_strategy("fo_query"), fo);
  c.expect(generators_of(fo_items) == std::vector<std::string>{"correctness", "subset_superset", "node_diff"},
           "FO strategy generator order");
  if (fo_items.size() == 3) {
    c.expect(fo_items[1].payload.value("relation", "") == "subset", "subset reported");
    NodeSet missing = decode_node_set(fo_items[2].payload["missing"]);
    NodeSet extra = decode_node_set(fo_items[2].payload["extra"]);
    bool verified = extra.empty() && missing == NodeSet{2};
    for (int n : missing)
      verified = verified && !fo_holds(student, graph, {{"x", n}}) && fo_holds(target, graph, {{"x", n}});
    c.expect(verified, "node diff witnesses re-verify");
  }

  // Modal witnesses re-verify as well.
  FeedbackContext ml;
  ml.task = "construct_formula";
  ml.logic = Logic::ML;
  ml.student_formula = parse_formula("[]p -> q", Logic::ML);
  ml.target_formula = parse_formula("<>p -> q", Logic::ML);
  auto ml_items = run_strategy(builtin_strategy("ml_construction"), ml);
  auto it = std::find_if(ml_items.begin(), ml_items.end(),
                         [](const FeedbackItem& i) { return i.generator == "distinguishing_model"; });
  c.expect(it != ml_items.end(), "ML strategy yields a distinguishing structure");
  if (it != ml_items.end()) {
    auto k = decode_kripke(it->payload["value"]);
    c.expect(holds_at(*ml.student_formula, k, *k.designated) != holds_at(*ml.target_formula, k, *k.designated),
             "ML distinguishing structure re-verifies");
  }
}

Access at(const std::string& client, const std::string& time) { return Access{client, parse_timestamp(time)}; }

void usage_analytics(Check& c) {
  std::vector<Access> log = {
      // alice: 29 min (same), exactly 30 min (new), late session crossing midnight
      at("alice", "2026-03-01T10:00:00Z"), at("alice", "2026-03-01T10:29:00Z"), at("alice", "2026-03-01T10:59:00Z"),
      at("alice", "2026-03-01T23:50:00Z"), at("alice", "2026-03-02T00:10:00Z"),
      // bob: 29:59 (same), 30:01 (new), next morning
      at("bob", "2026-03-01T10:00:00Z"), at("bob", "2026-03-01T10:29:59Z"), at("bob", "2026-03-01T11:00:00Z"),
      at("bob", "2026-03-02T09:00:00Z"),
      // carol: exactly 30 min (new), then 29:59 (same)
      at("carol", "2026-03-02T08:00:00Z"), at("carol", "2026-03-02T08:30:00Z"), at("carol", "2026-03-02T08:59:59Z"),
  };
  // alice 3 sessions on 03-01; bob 2 on 03-01 and 1 on 03-02; carol 2 on 03-02.
  const UsageReport expected = {{"2026-03-01", 5}, {"2026-03-02", 3}};
  c.expect(compute_usage(log) == expected, "hand-computed counts");
  std::mt19937_64 rng(0x5eed0007);
  bool stable = true;
  for (int i = 0; i < 100; ++i) {
    std::shuffle(log.begin(), log.end(), rng);
    stable = stable && compute_usage(log) == expected;
  }
  c.expect(stable, "counts invariant under permutation");
}

void persistence(Check& c) {
  const fs::path data = fs::temp_directory_path() / ("logicbench-acceptance-" + random_id());
  fs::create_directories(data);
  const std::string exercises = (kSource / "fixtures/exercises").string();
  ExerciseSpec spec = fixture("horn_chain");
  ExerciseCatalog catalog;
  catalog.add(spec);
  Json script = submissions("horn_chain");

  auto server = std::make_unique<ServerProcess>(LOGICBENCH_CLI, data.string(), exercises);
  std::string sid;
  {
    httplib::Client http("127.0.0.1", server->port());
    auto res = http.Post("/exercises/horn_chain/sessions", "", "application/json");
    c.expect(res && res->status == 201, "session created");
    if (!res) return;
    sid = Json::parse(res->body)["id"].get<std::string>();
  }
  SessionState expected = start_session(spec, sid);
  int restarts = 0;
  for (std::size_t i = 0; i < script.size(); ++i) {
    Json before;
    {
      httplib::Client http("127.0.0.1", server->port());
      auto res = http.Post("/sessions/" + sid + "/submit", script[i].dump(), "application/json");
      c.expect(res && res->status == 200 && Json::parse(res->body)["accepted"] == true,
               "submission " + std::to_string(i + 1) + " accepted");
      auto view = http.Get("/sessions/" + sid);
      if (view) before = Json::parse(view->body);
    }
    submit(spec, expected, script[i]);
    server->kill_hard();

    // The state on disk, recovered independently of the server.
    {
      SessionStore store(data, catalog);
      c.expect(store.get(sid).state == expected, "recovered state equals the in-process replay after submission " +
                                                     std::to_string(i + 1));
    }
    server = std::make_unique<ServerProcess>(LOGICBENCH_CLI, data.string(), exercises);
    ++restarts;
    httplib::Client http("127.0.0.1", server->port());
    auto view = http.Get("/sessions/" + sid);
    c.expect(view && view->status == 200 && Json::parse(view->body) == before,
             "served state after restart equals pre-kill state (submission " + std::to_string(i + 1) + ")");
  }
  c.expect(expected.status == SessionStatus::Finished, "scripted run finishes");
  server->terminate();
  fs::remove_all(data);
  c.note(std::to_string(restarts) + " kill/restart cycles");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Check&);
  };
  const Criterion criteria[] = {
      {"modal-workflow-end-to-end", modal_workflow},
      {"horn-workflow-end-to-end", horn_workflow},
      {"oracle-equivalence-suites", oracle_suites},
      {"unification-mgu", unification},
      {"feedback-strategy-conformance", feedback_conformance},
      {"usage-sessions-per-day", usage_analytics},
      {"persistence-kill-restart", persistence},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check c;
    try {
      criterion.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    std::string notes;
    for (const auto& n : c.notes) notes += (notes.empty() ? "" : "; ") + n;
    std::cout << (c.failures.empty() ? "PASS " : "FAIL ") << criterion.name;
    if (!notes.empty()) std::cout << " (" << notes << ")";
    std::cout << "\n";
    for (const auto& f : c.failures) std::cout << "    failed: " << f << "\n";
    failed += !c.failures.empty();
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (std::size(criteria) - failed) << "/" << std::size(criteria)
            << std::endl;
  return failed ? 1 : 0;
}
