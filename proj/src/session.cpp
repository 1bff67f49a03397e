#include <algorithm>
#include <regex>

#include "logicbench/error.hpp"
#include "logicbench/exercise.hpp"
#include "logicbench/reasoning.hpp"
#include "logicbench/syntax.hpp"

namespace logicbench {

std::string_view to_string(SessionStatus status) {
  return status == SessionStatus::Active ? "active" : "finished";
}

std::string_view to_string(Transition::Type type) {
  switch (type) {
    case Transition::Type::Stay: return "stay";
    case Transition::Type::Advance: return "advance";
    case Transition::Type::Finish: return "finish";
  }
  return "stay";
}

Json encode(const ProofState& p) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Tableau>) return Json{{"type", "tableau"}, {"state", encode(x)}};
        else if constexpr (std::is_same_v<T, ResolutionGraph>) return Json{{"type", "resolution"}, {"state", encode(x)}};
        else if constexpr (std::is_same_v<T, HornMarkingState>) return Json{{"type", "horn"}, {"state", encode(x)}};
        else return Json{{"type", "bisimulation"}, {"state", encode(x)}};
      },
      p);
}

namespace {

ProofState decode_proof(const Json& j, const std::string& path) {
  auto type = expect_string(require(j, "type", path), path + ".type");
  const Json& state = require(j, "state", path);
  if (type == "tableau") return decode_tableau(state, path + ".state");
  if (type == "resolution") return decode_resolution_graph(state, path + ".state");
  if (type == "horn") return decode_horn_state(state, path + ".state");
  if (type == "bisimulation") return decode_bisimulation_state(state, path + ".state");
  schema_error(path + ".type", "unknown proof type '" + type + "'");
}

Logic task_logic(const TaskSpec& t, const std::map<std::string, TaskValue>& inputs) {
  if (t.config.contains("logic") && t.config["logic"].is_string())
    return logic_from_string(t.config["logic"].get<std::string>());
  for (const auto& [name, v] : inputs) {
    if (v.kind == ValueKind::Formula && v.as<Formula>().is_modal()) return Logic::ML;
    if (v.kind == ValueKind::Kripke) return Logic::ML;
    if (v.kind == ValueKind::FoFormula || v.kind == ValueKind::Graph) return Logic::FO;
  }
  return Logic::PL;
}

TaskValue lookup(const SessionState& s, const std::string& task, const std::string& port) {
  auto it = s.environment.find(task + "." + port);
  if (it == s.environment.end())
    throw Error("unbound_reference", "no value bound for " + task + "." + port, task + "." + port);
  return it->second;
}

TaskValue resolve(const SessionState& s, const Binding& b) {
  switch (b.source) {
    case Binding::Source::Literal: return *b.literal;
    case Binding::Source::Reference: return lookup(s, b.task, b.port);
    case Binding::Source::Template: break;
  }
  static const std::regex ref(R"(\$ref:([A-Za-z_][A-Za-z0-9_-]*)\.([A-Za-z_][A-Za-z0-9_]*))");
  std::string text;
  auto last = b.text.cbegin();
  for (std::sregex_iterator m(b.text.begin(), b.text.end(), ref), end; m != end; ++m) {
    text.append(last, b.text.cbegin() + m->position());
    text += render(lookup(s, (*m)[1], (*m)[2]));
    last = b.text.cbegin() + m->position() + m->length();
  }
  text.append(last, b.text.cend());
  return decode_task_value(b.kind, Json(text), "template");
}

std::optional<ProofState> initial_proof(const TaskSpec& t, const std::map<std::string, TaskValue>& inputs) {
  auto input = [&](const std::string& name) -> const TaskValue& { return inputs.at(name); };
  switch (t.kind) {
    case TaskKind::Tableau: {
      Formula f = input("formula").as<Formula>();
      if (!check_normal_form(f, NormalFormKind::NNF)) f = to_nnf(f);
      return Tableau::create(task_logic(t, inputs), {f});
    }
    case TaskKind::HornSat: return HornMarkingState::create(input("formula").as<Formula>());
    case TaskKind::ResolutionPL: {
      const auto& v = input("clauses");
      if (v.kind == ValueKind::Formula) return ResolutionGraph::create(to_clause_set(v.as<Formula>()));
      return ResolutionGraph::create(v.as<ClauseSet>());
    }
    case TaskKind::ResolutionFO: return ResolutionGraph::create(input("clauses").as<ClauseSet>());
    case TaskKind::Bisimulation:
      return BisimulationState::create(input("left").as<KripkeStructure>(), input("right").as<KripkeStructure>());
    default: return std::nullopt;
  }
}

void enter(const ExerciseSpec& spec, SessionState& s, const std::string& task_id) {
  const TaskSpec& t = spec.task(task_id);
  TaskProgress p;
  for (const auto& [name, b] : t.inputs) p.inputs[name] = resolve(s, b);
  try {
    p.proof = initial_proof(t, p.inputs);
  } catch (const Error& e) {
    throw Error("invalid_input", "task " + t.id + " cannot start: " + e.what(), t.id);
  }
  s.current = t.id;
  s.progress[t.id] = std::move(p);
}

// Branch choice after `t` completed.
std::optional<std::string> next_task(const TaskSpec& t, const SessionState& s) {
  for (const auto& b : t.branches) {
    const Guard& g = b.when;
    bool hit = false;
    switch (g.type) {
      case Guard::Type::Always: hit = true; break;
      case Guard::Type::Choice: {
        auto it = s.environment.find(g.task + ".choice");
        hit = it != s.environment.end() && it->second.as<long long>() == g.choice;
        break;
      }
      case Guard::Type::Bool: {
        auto it = s.environment.find(g.task + "." + g.port);
        hit = it != s.environment.end() && it->second.as<bool>() == g.value;
        break;
      }
    }
    if (hit) return b.next;
  }
  if (t.next) return t.next;
  if (!t.branches.empty()) throw Error("guard_not_total", "no branch applies after task " + t.id, t.id);
  return std::nullopt;
}

const FeedbackStrategy& strategy_for(const ExerciseSpec& spec, const TaskSpec& t, const std::string& fallback,
                                     FeedbackStrategy& storage) {
  std::string name = fallback;
  if (t.config.contains("strategy") && t.config["strategy"].is_string()) name = t.config["strategy"].get<std::string>();
  if (auto it = spec.strategies.find(name); it != spec.strategies.end()) {
    storage = parse_strategy(it->second);
    return storage;
  }
  return builtin_strategy(name);
}

struct Graded {
  bool accepted = false;
  std::vector<FeedbackItem> feedback;
  std::map<std::string, TaskValue> outputs;  // set when the task is completed
  bool completed = false;
};

std::string answer_kind(const TaskSpec& t, Logic logic) {
  switch (t.kind) {
    case TaskKind::ConstructFormula:
    case TaskKind::Transform:
    case TaskKind::DistinguishWorlds: return "formula";
    case TaskKind::ConstructModel: return logic == Logic::PL ? "valuation" : logic == Logic::ML ? "kripke" : "graph";
    case TaskKind::Evaluate: return "boolean";
    case TaskKind::TruthTable: return "truth_table";
    case TaskKind::MultipleChoice: return "choice";
    case TaskKind::Messaging: return "ack";
    case TaskKind::ChooseVariables: return "variables";
    case TaskKind::FoQuery: return "fo_formula";
    default: return "step";
  }
}

long long choice_value(const Json& v, const std::string& path) {
  if (v.is_object() && v.contains("choice")) return expect_int(v["choice"], path + ".choice");
  return expect_int(v, path);
}

Graded grade_answer(const ExerciseSpec& spec, const TaskSpec& t, const TaskProgress& p, const Json& value) {
  const Logic logic = task_logic(t, p.inputs);
  FeedbackStrategy storage;
  FeedbackContext ctx;
  ctx.task = std::string(to_string(t.kind));
  ctx.logic = logic;
  Graded g;
  std::string fallback = "default";
  TaskValue answer;
  const std::string path = "$.value";
  switch (t.kind) {
    case TaskKind::ConstructFormula:
    case TaskKind::Transform: {
      Formula f = decode_formula(value, logic == Logic::PL ? Logic::PL : Logic::ML, path);
      ctx.student_formula = f;
      if (t.kind == TaskKind::ConstructFormula) {
        ctx.target_formula = p.inputs.at("target").as<Formula>();
        fallback = logic == Logic::ML ? "ml_construction" : "pl_construction";
      } else {
        ctx.target_formula = p.inputs.at("formula").as<Formula>();
        ctx.required_form = normal_form_from_string(t.config["form"].get<std::string>());
        fallback = "transform";
      }
      answer = TaskValue::formula(f);
      g.outputs["formula"] = answer;
      break;
    }
    case TaskKind::ConstructModel: {
      const auto& target = p.inputs.at("formula");
      Candidate c;
      if (logic == Logic::PL) {
        c = decode_valuation(value, path);
        answer = {ValueKind::Valuation, std::get<Valuation>(c)};
      } else if (logic == Logic::ML) {
        c = decode_kripke(value, path);
        answer = {ValueKind::Kripke, std::get<KripkeStructure>(c)};
      } else {
        c = decode_graph(value, path);
        answer = {ValueKind::Graph, std::get<ColoredGraph>(c)};
      }
      if (const auto* k = std::get_if<KripkeStructure>(&c); k && !k->designated)
        schema_error(path + ".designated", "the model needs a designated world");
      ModelVerdict verdict = target.kind == ValueKind::FoFormula ? check_model(target.as<FoFormula>(), c)
                                                                 : check_model(target.as<Formula>(), c);
      if (t.config.contains("max_worlds")) {
        long long max = t.config["max_worlds"].get<long long>();
        if (const auto* k = std::get_if<KripkeStructure>(&c); k && static_cast<long long>(k->worlds.size()) > max) {
          verdict.satisfies = false;
          verdict.trace = EvalTrace{"at most " + std::to_string(max) + " worlds are allowed", std::nullopt, false, {}};
        }
      }
      ctx.model = verdict;
      fallback = "model";
      g.outputs["model"] = answer;
      break;
    }
    case TaskKind::Evaluate: {
      bool claimed = expect_bool(value, path);
      const Formula& f = p.inputs.at("formula").as<Formula>();
      const auto& structure = p.inputs.at("structure");
      bool actual;
      if (structure.kind == ValueKind::Valuation) {
        Valuation v = structure.as<Valuation>();
        for (const auto& a : atoms(f)) v.emplace(a, false);
        actual = eval_pl(f, v);
      } else {
        const auto& k = structure.as<KripkeStructure>();
        World w = t.config.contains("world") ? t.config["world"].get<std::string>() : k.designated.value_or(k.worlds.at(0));
        actual = eval_ml(f, k, w);
      }
      ctx.correct = claimed == actual;
      g.outputs["value"] = TaskValue::boolean(actual);
      break;
    }
    case TaskKind::TruthTable: {
      const Formula& f = p.inputs.at("formula").as<Formula>();
      TruthTable table = decode_truth_table(value.is_object() && value.contains("table") ? value["table"] : value,
                                            path);
      ctx.cells = truth_table_check(f, table);
      fallback = "table";
      bool sat = false;
      for (const auto& row : table.rows) sat = sat || row.back();
      g.outputs["satisfiable"] = TaskValue::boolean(sat);
      break;
    }
    case TaskKind::DistinguishWorlds: {
      Formula f = decode_formula(value, Logic::ML, path);
      const auto& left = p.inputs.at("left").as<KripkeStructure>();
      const auto& right = p.inputs.at("right").as<KripkeStructure>();
      World a = t.config.contains("left_world") ? t.config["left_world"].get<std::string>()
                                                 : left.designated.value_or(left.worlds.at(0));
      World b = t.config.contains("right_world") ? t.config["right_world"].get<std::string>()
                                                  : right.designated.value_or(right.worlds.at(0));
      ctx.correct = distinguishes(f, left, a, right, b);
      g.outputs["formula"] = TaskValue::formula(f);
      break;
    }
    case TaskKind::MultipleChoice: {
      long long choice = choice_value(value, path);
      const long long n = static_cast<long long>(t.config["options"].size());
      if (choice < 0 || choice >= n) schema_error(path, "option out of range");
      std::optional<long long> correct;
      if (t.config.contains("correct")) correct = t.config["correct"].get<long long>();
      if (t.config.contains("correct_when")) {
        const auto& key = p.inputs.at("key");
        std::string k = key.kind == ValueKind::Boolean ? (key.as<bool>() ? "true" : "false")
                                                       : std::to_string(key.as<long long>());
        if (t.config["correct_when"].contains(k)) correct = t.config["correct_when"][k].get<long long>();
      }
      ctx.correct = !correct || *correct == choice;
      g.outputs["choice"] = TaskValue::choice(choice);
      break;
    }
    case TaskKind::Messaging:
      ctx.correct = true;
      break;
    case TaskKind::ChooseVariables: {
      auto chosen = decode_task_value(ValueKind::Variables, value, path);
      std::set<std::string> expected;
      for (const auto& v : t.config["expected"]) expected.insert(v.get<std::string>());
      ctx.correct = chosen.as<std::set<std::string>>() == expected;
      g.outputs["variables"] = chosen;
      break;
    }
    case TaskKind::FoQuery: {
      FoFormula f = decode_fo_formula(value, path);
      const auto& graph = p.inputs.at("graph").as<ColoredGraph>();
      std::set<std::string> colors;
      if (t.config.contains("colors"))
        for (const auto& c : t.config["colors"]) colors.insert(c.get<std::string>());
      if (!uses_graph_signature(f, colors))
        throw Error("schema_violation", "the formula must use only E, the colors and equality", path);
      if (free_variables(f).size() != 1)
        throw Error("schema_violation", "the query needs exactly one free variable", path);
      ctx.student_nodes = query_nodes(f, graph);
      ctx.correct_nodes = p.inputs.count("nodes") ? p.inputs.at("nodes").as<NodeSet>()
                                                  : query_nodes(p.inputs.at("target").as<FoFormula>(), graph);
      ctx.graph = graph;
      fallback = "fo_query";
      g.outputs["formula"] = {ValueKind::FoFormula, f};
      break;
    }
    default:
      throw Error("kind_mismatch", "this task expects proof steps", t.id);
  }
  g.accepted = context_correct(ctx);
  if (t.kind != TaskKind::Messaging) g.feedback = run_strategy(strategy_for(spec, t, fallback, storage), ctx);
  g.completed = g.accepted;
  if (!g.accepted) g.outputs.clear();
  return g;
}

std::string step_string(const Json& j, const std::string& key, const std::string& path) {
  return expect_string(require(j, key, path), path + "." + key);
}

int step_int(const Json& j, const std::string& key, const std::string& path) {
  return static_cast<int>(expect_int(require(j, key, path), path + "." + key));
}

std::optional<int> step_opt_int(const Json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return static_cast<int>(expect_int(j[key], path + "." + key));
}

ClauseSet clause_set_of(const ResolutionGraph& g) {
  ClauseSet s;
  for (const auto& n : g.nodes())
    if (!n.parents) s.insert(n.clause);
  return s;
}

Formula formula_of(const ClauseSet& s) {
  std::vector<Formula> clauses;
  for (const auto& c : s) {
    std::vector<Formula> lits;
    for (const auto& l : c) {
      Formula a = Formula::atom(l.predicate);
      lits.push_back(l.positive ? a : Formula::negation(a));
    }
    clauses.push_back(disjoin(lits));
  }
  return conjoin(clauses);
}

// Applies one proof step to `proof` in place; returns the verdict and, when the
// task is complete, its outputs.
Graded grade_step(const TaskSpec& t, ProofState& proof, const Json& step) {
  const std::string path = "$.step";
  expect_object(step, path);
  Graded g;
  StepVerdict verdict;
  bool step_known = false;
  if (auto* tab = std::get_if<Tableau>(&proof)) {
    if (step.contains("apply")) {
      const Json& a = step["apply"];
      auto p = path + ".apply";
      TableauRule rule;
      try {
        rule = tableau_rule_from_string(step_string(a, "rule", p));
      } catch (const Error& e) {
        if (e.code() == "schema_violation") throw;
        schema_error(p + ".rule", e.what());
      }
      std::optional<std::string> target;
      if (a.contains("target") && !a["target"].is_null()) target = expect_string(a["target"], p + ".target");
      verdict = tab->apply(step_int(a, "premise", p), rule, step_int(a, "branch", p), target);
      step_known = true;
    } else if (step.contains("close")) {
      const Json& c = step["close"];
      auto p = path + ".close";
      verdict = tab->close(step_int(c, "branch", p), step_int(c, "first", p), step_opt_int(c, "second", p));
      step_known = true;
    }
    if (step_known && verdict.accepted) {
      auto status = tab->status();
      if (status.kind != TableauStatus::Kind::Incomplete) {
        g.completed = true;
        g.outputs["satisfiable"] = TaskValue::boolean(status.kind == TableauStatus::Kind::OpenSaturated);
      }
    }
  } else if (auto* horn = std::get_if<HornMarkingState>(&proof)) {
    if (step.contains("mark")) {
      const Json& m = step["mark"];
      auto p = path + ".mark";
      long long clause = expect_int(require(m, "clause", p), p + ".clause");
      if (clause < 0) schema_error(p + ".clause", "clause index must not be negative");
      verdict = horn->mark(step_string(m, "variable", p), static_cast<std::size_t>(clause));
      step_known = true;
    } else if (step.contains("conclude")) {
      HornClaim claim;
      try {
        claim = horn_claim_from_string(expect_string(step["conclude"], path + ".conclude"));
      } catch (const Error& e) {
        if (e.code() == "schema_violation") throw;
        schema_error(path + ".conclude", e.what());
      }
      verdict = horn->conclude(claim);
      step_known = true;
      if (verdict.accepted) {
        g.completed = true;
        g.outputs["satisfiable"] = TaskValue::boolean(claim == HornClaim::Satisfiable);
      }
    }
  } else if (auto* res = std::get_if<ResolutionGraph>(&proof)) {
    const bool fo = t.kind == TaskKind::ResolutionFO;
    if (step.contains("resolve")) {
      const Json& r = step["resolve"];
      auto p = path + ".resolve";
      const Json& parents = require(r, "parents", p);
      if (!parents.is_array() || parents.size() != 2) schema_error(p + ".parents", "expected two node ids");
      int a = static_cast<int>(expect_int(parents[0], p + ".parents[0]"));
      int b = static_cast<int>(expect_int(parents[1], p + ".parents[1]"));
      Clause claimed = decode_clause(require(r, "resolvent", p), p + ".resolvent");
      if (fo) {
        const Json& pivots = require(r, "pivots", p);
        if (!pivots.is_array() || pivots.size() != 2) schema_error(p + ".pivots", "expected two literals");
        Substitution s1, s2;
        if (r.contains("substitutions")) {
          const Json& subs = r["substitutions"];
          if (!subs.is_array() || subs.size() != 2) schema_error(p + ".substitutions", "expected two substitutions");
          s1 = decode_substitution(subs[0], p + ".substitutions[0]");
          s2 = decode_substitution(subs[1], p + ".substitutions[1]");
        }
        verdict = res->resolve_fo(a, s1, b, s2, decode_literal(pivots[0], p + ".pivots[0]"),
                                  decode_literal(pivots[1], p + ".pivots[1]"), claimed);
      } else {
        verdict = res->resolve_pl(a, b, decode_literal(require(r, "pivot", p), p + ".pivot"), claimed);
      }
      step_known = true;
      if (verdict.accepted && res->derived_empty_clause()) {
        g.completed = true;
        g.outputs["satisfiable"] = TaskValue::boolean(false);
      }
    } else if (step.contains("conclude") && !fo) {
      auto claim = expect_string(step["conclude"], path + ".conclude");
      if (claim != "satisfiable") schema_error(path + ".conclude", "only satisfiable can be claimed; derive the empty clause otherwise");
      step_known = true;
      if (pl_satisfiable(formula_of(clause_set_of(*res))).satisfiable) {
        verdict = StepVerdict::accept("the clause set is satisfiable");
        g.completed = true;
        g.outputs["satisfiable"] = TaskValue::boolean(true);
      } else {
        verdict = StepVerdict::reject("premature_claim", "the clause set is unsatisfiable; the empty clause can be derived");
      }
    }
  } else if (auto* bis = std::get_if<BisimulationState>(&proof)) {
    if (step.contains("remove")) {
      const Json& r = step["remove"];
      auto p = path + ".remove";
      Removal removal;
      auto pair = decode_relation(Json::array({require(r, "pair", p)}), p + ".pair");
      removal.pair = *pair.begin();
      try {
        removal.reason = removal_reason_from_string(step_string(r, "reason", p));
      } catch (const Error& e) {
        if (e.code() == "schema_violation") throw;
        schema_error(p + ".reason", e.what());
      }
      if (r.contains("successor") && !r["successor"].is_null()) removal.successor = expect_string(r["successor"], p + ".successor");
      verdict = bis->remove(removal);
      step_known = true;
    } else if (step.contains("conclude")) {
      auto claim = decode_relation(step["conclude"], path + ".conclude");
      verdict = bis->conclude(claim);
      step_known = true;
      if (verdict.accepted) {
        g.completed = true;
        g.outputs["relation"] = {ValueKind::Relation, bis->relation};
      }
    }
  }
  if (!step_known) throw Error("kind_mismatch", "this step does not belong to a " + std::string(to_string(t.kind)) + " task", t.id);
  g.accepted = verdict.accepted;
  FeedbackContext ctx;
  ctx.task = std::string(to_string(t.kind));
  ctx.step = verdict;
  g.feedback = run_strategy(builtin_strategy("step"), ctx);
  return g;
}

void require_kind(const TaskSpec& t, const std::string& expected, const Json& submission) {
  if (!submission.contains("kind")) return;
  auto kind = expect_string(submission["kind"], "$.kind");
  if (kind != expected)
    throw Error("kind_mismatch",
                std::string(to_string(t.kind)) + " tasks expect " + expected + ", not " + kind, t.id);
}

}  // namespace

SessionState start_session(const ExerciseSpec& spec, std::string session_id) {
  auto errors = validate_exercise(spec);
  if (!errors.empty()) {
    std::string message = "exercise " + spec.id + " is invalid:";
    for (const auto& e : errors) message += " [" + e.task + "] " + e.message + ";";
    throw Error("invalid_exercise", message, spec.id);
  }
  SessionState s;
  s.exercise_id = spec.id;
  s.session_id = std::move(session_id);
  enter(spec, s, spec.tasks.front().id);
  return s;
}

SubmitResult submit(const ExerciseSpec& spec, SessionState& session, const Json& submission) {
  if (session.status == SessionStatus::Finished)
    throw Error("session_finished", "the session is already finished", session.session_id);
  if (!submission.is_object()) schema_error("$", "expected an object");
  SessionState next = session;
  const TaskSpec& t = spec.task(next.current);
  TaskProgress& p = next.progress.at(t.id);
  const Logic logic = task_logic(t, p.inputs);

  Graded graded;
  if (submission.contains("step")) {
    if (!p.proof) throw Error("kind_mismatch", std::string(to_string(t.kind)) + " tasks do not take proof steps", t.id);
    graded = grade_step(t, *p.proof, submission["step"]);
    if (!graded.accepted) p.proof = session.progress.at(t.id).proof;
    if (graded.accepted) ++p.accepted_steps;
  } else {
    const std::string expected = answer_kind(t, logic);
    if (expected == "step")
      throw Error("kind_mismatch", std::string(to_string(t.kind)) + " tasks expect proof steps", t.id);
    require_kind(t, expected, submission);
    if (t.kind == TaskKind::Messaging) {
      graded = grade_answer(spec, t, p, Json(nullptr));
    } else {
      graded = grade_answer(spec, t, p, require(submission, "value", "$"));
    }
  }
  ++p.submissions;
  p.feedback = graded.feedback;
  p.revealed = graded.feedback.empty() ? -1 : 0;

  SubmitResult result;
  result.accepted = graded.accepted;
  result.feedback = graded.feedback;
  if (graded.completed) {
    for (const auto& [port, value] : graded.outputs) next.environment[t.id + "." + port] = value;
    next.completed.push_back(t.id);
    auto following = next_task(t, next);
    if (following) {
      enter(spec, next, *following);
      result.transition = {Transition::Type::Advance, *following};
    } else {
      next.current.clear();
      next.status = SessionStatus::Finished;
      result.transition = {Transition::Type::Finish, {}};
    }
  }
  session = std::move(next);
  return result;
}

std::optional<FeedbackItem> reveal_next(SessionState& session) {
  if (session.current.empty()) return std::nullopt;
  auto it = session.progress.find(session.current);
  if (it == session.progress.end()) return std::nullopt;
  TaskProgress& p = it->second;
  if (p.revealed + 1 >= static_cast<int>(p.feedback.size())) return std::nullopt;
  ++p.revealed;
  return p.feedback[static_cast<std::size_t>(p.revealed)];
}

Json encode(const SessionState& s) {
  Json env = Json::object();
  for (const auto& [key, v] : s.environment) env[key] = encode(v);
  Json progress = Json::object();
  for (const auto& [task, p] : s.progress) {
    Json inputs = Json::object();
    for (const auto& [name, v] : p.inputs) inputs[name] = encode(v);
    Json feedback = Json::array();
    for (const auto& f : p.feedback) feedback.push_back(encode(f));
    progress[task] = Json{{"inputs", inputs},
                          {"proof", p.proof ? encode(*p.proof) : Json(nullptr)},
                          {"feedback", feedback},
                          {"revealed", p.revealed},
                          {"submissions", p.submissions},
                          {"accepted_steps", p.accepted_steps}};
  }
  return Json{{"exercise", s.exercise_id},
              {"session", s.session_id},
              {"status", to_string(s.status)},
              {"current", s.current.empty() ? Json(nullptr) : Json(s.current)},
              {"completed", s.completed},
              {"environment", env},
              {"progress", progress}};
}

SessionState decode_session(const Json& j, const std::string& path) {
  SessionState s;
  s.exercise_id = expect_string(require(j, "exercise", path), path + ".exercise");
  s.session_id = expect_string(require(j, "session", path), path + ".session");
  auto status = expect_string(require(j, "status", path), path + ".status");
  if (status != "active" && status != "finished") schema_error(path + ".status", "unknown status");
  s.status = status == "active" ? SessionStatus::Active : SessionStatus::Finished;
  const Json& current = require(j, "current", path);
  if (!current.is_null()) s.current = expect_string(current, path + ".current");
  for (const auto& c : expect_array(require(j, "completed", path), path + ".completed"))
    s.completed.push_back(expect_string(c, path + ".completed[]"));
  for (const auto& [key, v] : expect_object(require(j, "environment", path), path + ".environment").items())
    s.environment[key] = decode_task_value(v, path + ".environment." + key);
  for (const auto& [task, pj] : expect_object(require(j, "progress", path), path + ".progress").items()) {
    auto p = path + ".progress." + task;
    TaskProgress tp;
    for (const auto& [name, v] : expect_object(require(pj, "inputs", p), p + ".inputs").items())
      tp.inputs[name] = decode_task_value(v, p + ".inputs." + name);
    const Json& proof = require(pj, "proof", p);
    if (!proof.is_null()) tp.proof = decode_proof(proof, p + ".proof");
    const auto& fb = expect_array(require(pj, "feedback", p), p + ".feedback");
    for (std::size_t i = 0; i < fb.size(); ++i)
      tp.feedback.push_back(decode_feedback_item(fb[i], p + ".feedback[" + std::to_string(i) + "]"));
    tp.revealed = static_cast<int>(expect_int(require(pj, "revealed", p), p + ".revealed"));
    tp.submissions = static_cast<int>(expect_int(require(pj, "submissions", p), p + ".submissions"));
    tp.accepted_steps = static_cast<int>(expect_int(require(pj, "accepted_steps", p), p + ".accepted_steps"));
    s.progress[task] = std::move(tp);
  }
  return s;
}

Json describe_task(const ExerciseSpec& spec, const SessionState& session) {
  if (session.current.empty()) return nullptr;
  const TaskSpec& t = spec.task(session.current);
  const TaskProgress& p = session.progress.at(t.id);
  Json inputs = Json::object();
  for (const auto& [name, v] : p.inputs) inputs[name] = encode(v);
  Json config = t.config;
  for (const char* hidden : {"correct", "correct_when", "expected", "strategy"}) config.erase(hidden);
  Json revealed = Json::array();
  for (int i = 0; i <= p.revealed && i < static_cast<int>(p.feedback.size()); ++i)
    revealed.push_back(encode(p.feedback[static_cast<std::size_t>(i)]));
  return Json{{"id", t.id},
              {"kind", to_string(t.kind)},
              {"prompt", t.prompt},
              {"logic", to_string(task_logic(t, p.inputs))},
              {"answer", answer_kind(t, task_logic(t, p.inputs))},
              {"inputs", inputs},
              {"config", config},
              {"proof", p.proof ? encode(*p.proof) : Json(nullptr)},
              {"feedback", revealed},
              {"remaining_feedback", static_cast<int>(p.feedback.size()) - 1 - std::max(p.revealed, -1)}};
}

}  // namespace logicbench
