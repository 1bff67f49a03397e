#include "logicbench/feedback.hpp"

#include <algorithm>
#include <bitset>
#include <functional>
#include <regex>
#include <sstream>

#include "logicbench/error.hpp"
#include "logicbench/reasoning.hpp"
#include "logicbench/syntax.hpp"

namespace logicbench {

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Info: return "info";
    case Severity::Hint: return "hint";
    case Severity::Error: return "error";
    case Severity::Success: return "success";
  }
  return "info";
}

namespace {

Severity severity_from_string(const std::string& s, const std::string& path) {
  if (s == "info") return Severity::Info;
  if (s == "hint") return Severity::Hint;
  if (s == "error") return Severity::Error;
  if (s == "success") return Severity::Success;
  schema_error(path, "unknown severity '" + s + "'");
}

}  // namespace

Json encode(const FeedbackItem& item) {
  return Json{{"generator", item.generator},
              {"severity", to_string(item.severity)},
              {"message", item.message},
              {"payload", item.payload},
              {"rank", item.rank}};
}

FeedbackItem decode_feedback_item(const Json& j, const std::string& path) {
  FeedbackItem item;
  item.generator = expect_string(require(j, "generator", path), path + ".generator");
  item.severity = severity_from_string(expect_string(require(j, "severity", path), path + ".severity"),
                                       path + ".severity");
  item.message = expect_string(require(j, "message", path), path + ".message");
  if (auto it = j.find("payload"); it != j.end()) item.payload = *it;
  item.rank = static_cast<int>(expect_int(require(j, "rank", path), path + ".rank"));
  return item;
}

// ---------------------------------------------------------------------------
// Misconceptions

const std::vector<MisconceptionRule>& misconception_rules() {
  static const std::vector<MisconceptionRule> rules = {
      {"implication_swap", "premise and conclusion of an implication swapped",
       "Check the direction of your implications. Which part is the condition, which the consequence?",
       "In {sub} premise and conclusion are swapped; you probably meant {fix}."},
      {"and_or_confusion", "conjunction and disjunction confused",
       "Check whether the statement requires both parts to hold or only one of them.",
       "{sub} uses the wrong connective; you probably meant {fix}."},
      {"negation_drop", "a required negation is missing",
       "Check whether some part of the statement should be negated.",
       "{sub} should be negated: {fix}."},
      {"negation_insert", "a superfluous negation",
       "Check your negations. Is every negation required by the statement?",
       "The negation in {sub} is superfluous; you probably meant {fix}."},
      {"biimplication_for_implication", "biimplication used where an implication suffices",
       "Check whether the statement really holds in both directions.",
       "{sub} claims both directions; only {fix} is required."},
      {"box_diamond_swap", "box and diamond confused",
       "Check whether the statement talks about all successors or about some successor.",
       "{sub} uses the wrong modality; you probably meant {fix}."},
  };
  return rules;
}

const MisconceptionRule& misconception_rule(const std::string& id) {
  for (const auto& r : misconception_rules())
    if (r.id == id) return r;
  throw Error("unknown_misconception", "unknown misconception rule '" + id + "'");
}

std::optional<Formula> rewrite(const std::string& id, const Formula& f, const Path& path) {
  const Formula& g = subformula_at(f, path);
  std::optional<Formula> out;
  if (id == "implication_swap") {
    if (g.op() == Op::Implies) out = Formula::implication(g.rhs(), g.lhs());
  } else if (id == "and_or_confusion") {
    if (g.op() == Op::And) out = Formula::disjunction(g.lhs(), g.rhs());
    else if (g.op() == Op::Or) out = Formula::conjunction(g.lhs(), g.rhs());
  } else if (id == "negation_drop") {
    if (g.op() != Op::Not) out = Formula::negation(g);
  } else if (id == "negation_insert") {
    if (g.op() == Op::Not) out = g.operand();
  } else if (id == "biimplication_for_implication") {
    if (g.op() == Op::Iff) out = Formula::implication(g.lhs(), g.rhs());
  } else if (id == "box_diamond_swap") {
    if (g.op() == Op::Box) out = Formula::diamond(g.operand());
    else if (g.op() == Op::Diamond) out = Formula::box(g.operand());
  } else {
    throw Error("unknown_misconception", "unknown misconception rule '" + id + "'");
  }
  if (!out) return std::nullopt;
  return replace_at(f, path, *out);
}

namespace {

constexpr std::size_t kMaxMisconceptionAtoms = 10;
using Bits = std::bitset<std::size_t{1} << kMaxMisconceptionAtoms>;

// Truth vector of `f` over all valuations of `atoms`.
Bits truth_vector(const Formula& f, const std::vector<std::string>& atoms) {
  const std::size_t rows = std::size_t{1} << atoms.size();
  Bits mask;
  for (std::size_t r = 0; r < rows; ++r) mask.set(r);
  switch (f.op()) {
    case Op::Atom: {
      auto i = static_cast<std::size_t>(std::find(atoms.begin(), atoms.end(), f.name()) - atoms.begin());
      Bits b;
      for (std::size_t r = 0; r < rows; ++r)
        if ((r >> i) & 1U) b.set(r);
      return b;
    }
    case Op::True: return mask;
    case Op::False: return Bits{};
    case Op::Not: return ~truth_vector(f.operand(), atoms) & mask;
    case Op::And: return truth_vector(f.lhs(), atoms) & truth_vector(f.rhs(), atoms);
    case Op::Or: return truth_vector(f.lhs(), atoms) | truth_vector(f.rhs(), atoms);
    case Op::Implies: return (~truth_vector(f.lhs(), atoms) | truth_vector(f.rhs(), atoms)) & mask;
    case Op::Iff: return ~(truth_vector(f.lhs(), atoms) ^ truth_vector(f.rhs(), atoms)) & mask;
    default: break;
  }
  throw Error("internal", "modal formula in propositional truth vector");
}

}  // namespace

std::vector<MisconceptionMatch> detect_misconceptions(const Formula& student, const Formula& target,
                                                      const std::vector<MisconceptionRule>& rules) {
  std::set<std::string> all = atoms(student);
  for (const auto& a : atoms(target)) all.insert(a);
  if (all.size() > kMaxMisconceptionAtoms) return {};
  const bool modal = student.is_modal() || target.is_modal();
  const std::vector<std::string> order(all.begin(), all.end());

  std::function<bool(const Formula&)> matches;
  if (modal) {
    matches = [&](const Formula& g) { return ml_equivalent(g, target).equivalent; };
  } else {
    Bits want = truth_vector(target, order);
    matches = [&, want](const Formula& g) { return truth_vector(g, order) == want; };
  }
  if (matches(student)) return {};

  std::vector<MisconceptionMatch> out;
  std::set<Formula> seen;
  struct Single {
    MisconceptionStep step;
    Formula rewritten;
    bool matched;
  };
  std::vector<Single> singles;
  for (const auto& path : positions(student)) {
    for (const auto& rule : rules) {
      auto g = rewrite(rule.id, student, path);
      if (!g) continue;
      bool ok = matches(*g);
      singles.push_back({{rule.id, path}, *g, ok});
      if (ok && seen.insert(*g).second) out.push_back({{{rule.id, path}}, *g});
    }
  }
  for (const auto& s : singles) {
    if (s.matched) continue;
    for (const auto& path : positions(s.rewritten)) {
      for (const auto& rule : rules) {
        auto g = rewrite(rule.id, s.rewritten, path);
        if (!g || *g == student || !matches(*g) || !seen.insert(*g).second) continue;
        out.push_back({{s.step, {rule.id, path}}, *g});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Strategies

const std::map<std::string, std::string>& generator_registry() {
  static const std::map<std::string, std::string> registry = {
      {"correctness", "any"},
      {"misconception_hint", "formula"},
      {"misconception_explicit", "formula"},
      {"misconception_position", "formula"},
      {"distinguishing_model", "formula"},
      {"normal_form", "formula"},
      {"subset_superset", "nodes"},
      {"node_diff", "nodes"},
      {"step_verdict", "step"},
      {"model_trace", "model"},
      {"cell_diff", "cells"},
  };
  return registry;
}

namespace {

std::string_view condition_keyword(ConditionKind k) {
  switch (k) {
    case ConditionKind::Always: return "always";
    case ConditionKind::Produced: return "produced";
    case ConditionKind::Empty: return "empty";
    case ConditionKind::Incorrect: return "incorrect";
    case ConditionKind::Correct: return "correct";
  }
  return "always";
}

std::string_view continuation_keyword(Continuation c) {
  switch (c) {
    case Continuation::Continue: return "";
    case Continuation::Stop: return "stop";
    case Continuation::StopIfCorrect: return "stop_if_correct";
    case Continuation::StopIfIncorrect: return "stop_if_incorrect";
  }
  return "";
}

}  // namespace

FeedbackStrategy parse_strategy(std::string_view text) {
  static const std::regex header(R"(^\s*strategy\s+([A-Za-z_][A-Za-z0-9_]*)\s*$)");
  static const std::regex line_re(
      R"(^\s*rule\s+([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(?:when\s+)?(always|incorrect|correct|(produced|empty)\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\))\s+run\s+([A-Za-z_][A-Za-z0-9_]*)(?:\s+(stop|stop_if_correct|stop_if_incorrect))?\s*$)");
  FeedbackStrategy s;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  const std::set<std::string> expected{"rule <name>: when <condition> run <generator> [stop]"};
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::smatch m;
    if (std::regex_match(line, m, header) && s.rules.empty() && s.name.empty()) {
      s.name = m[1];
      continue;
    }
    if (!std::regex_match(line, m, line_re))
      throw ParseError("line " + std::to_string(lineno) + ": malformed rule", lineno, expected);
    StrategyRule r;
    r.name = m[1];
    std::string cond = m[2];
    if (m[3].matched) {
      r.condition = m[3] == "produced" ? ConditionKind::Produced : ConditionKind::Empty;
      r.condition_target = m[4];
    } else if (cond == "always") {
      r.condition = ConditionKind::Always;
    } else if (cond == "incorrect") {
      r.condition = ConditionKind::Incorrect;
    } else {
      r.condition = ConditionKind::Correct;
    }
    r.generator = m[5];
    if (m[6].matched) {
      std::string c = m[6];
      r.continuation = c == "stop" ? Continuation::Stop
                       : c == "stop_if_correct" ? Continuation::StopIfCorrect
                                                : Continuation::StopIfIncorrect;
    }
    const std::string locus = "line " + std::to_string(lineno);
    if (!generator_registry().count(r.generator))
      throw Error("unknown_generator", locus + ": unknown generator '" + r.generator + "'", locus);
    for (const auto& earlier : s.rules)
      if (earlier.name == r.name) throw Error("duplicate_rule", locus + ": rule '" + r.name + "' defined twice", locus);
    if (!r.condition_target.empty()) {
      bool earlier = std::any_of(s.rules.begin(), s.rules.end(), [&](const StrategyRule& e) {
        return e.name == r.condition_target || e.generator == r.condition_target;
      });
      if (!earlier)
        throw Error("forward_reference",
                    locus + ": condition refers to '" + r.condition_target + "', which is not an earlier rule", locus);
    }
    s.rules.push_back(std::move(r));
  }
  if (s.rules.empty()) throw ParseError("a strategy needs at least one rule", lineno + 1, expected);
  return s;
}

std::string render(const FeedbackStrategy& strategy) {
  std::string out;
  if (!strategy.name.empty()) out += "strategy " + strategy.name + "\n";
  for (const auto& r : strategy.rules) {
    out += "rule " + r.name + ": when " + std::string(condition_keyword(r.condition));
    if (!r.condition_target.empty()) out += "(" + r.condition_target + ")";
    out += " run " + r.generator;
    if (r.continuation != Continuation::Continue) out += " " + std::string(continuation_keyword(r.continuation));
    out += "\n";
  }
  return out;
}

namespace {

const std::map<std::string, FeedbackStrategy>& builtins() {
  static const std::map<std::string, FeedbackStrategy> table = [] {
    std::map<std::string, FeedbackStrategy> t;
    const char* construction =
        "rule correctness: when always run correctness\n"
        "rule hint: when incorrect run misconception_hint\n"
        "rule explicit: when incorrect run misconception_explicit\n"
        "rule position: when incorrect run misconception_position\n"
        "rule model: when incorrect run distinguishing_model\n";
    t["pl_construction"] = parse_strategy(std::string("strategy pl_construction\n") + construction);
    t["ml_construction"] = parse_strategy(std::string("strategy ml_construction\n") + construction);
    t["fo_query"] = parse_strategy(
        "strategy fo_query\n"
        "rule correctness: when always run correctness\n"
        "rule subset: when incorrect run subset_superset\n"
        "rule diff: when incorrect run node_diff\n");
    t["transform"] = parse_strategy(
        "strategy transform\n"
        "rule correctness: when always run correctness\n"
        "rule form: when incorrect run normal_form\n"
        "rule model: when incorrect run distinguishing_model\n");
    t["step"] = parse_strategy("strategy step\nrule verdict: when always run step_verdict\n");
    t["model"] = parse_strategy(
        "strategy model\n"
        "rule correctness: when always run correctness\n"
        "rule trace: when incorrect run model_trace\n");
    t["table"] = parse_strategy(
        "strategy table\n"
        "rule correctness: when always run correctness\n"
        "rule cells: when incorrect run cell_diff\n");
    t["default"] = parse_strategy("strategy default\nrule correctness: when always run correctness\n");
    return t;
  }();
  return table;
}

}  // namespace

const FeedbackStrategy& builtin_strategy(const std::string& name) {
  auto it = builtins().find(name);
  if (it == builtins().end()) throw Error("unknown_strategy", "unknown feedback strategy '" + name + "'", name);
  return it->second;
}

bool has_builtin_strategy(const std::string& name) { return builtins().count(name) > 0; }

namespace {

bool in_form(const Formula& f, NormalFormKind kind) {
  try {
    return check_normal_form(f, kind);
  } catch (const Error&) {
    return false;
  }
}

bool formulas_equivalent(const FeedbackContext& ctx) {
  if (ctx.logic == Logic::PL && ctx.student_formula->is_modal()) return false;
  return equivalent(*ctx.student_formula, *ctx.target_formula).equivalent;
}

Json path_json(const Path& p) {
  Json out = Json::array();
  for (auto i : p) out.push_back(i);
  return out;
}

// Shared analysis for the generators of one strategy run.
class Analysis {
 public:
  explicit Analysis(const FeedbackContext& ctx) : ctx_(ctx) {}

  bool correct() {
    if (!correct_) correct_ = context_correct(ctx_);
    return *correct_;
  }

  const std::vector<MisconceptionMatch>& misconceptions() {
    if (!misconceptions_) {
      misconceptions_.emplace();
      if (ctx_.student_formula && ctx_.target_formula && !formulas_equivalent(ctx_))
        *misconceptions_ = detect_misconceptions(*ctx_.student_formula, *ctx_.target_formula, misconception_rules());
    }
    return *misconceptions_;
  }

 private:
  const FeedbackContext& ctx_;
  std::optional<bool> correct_;
  std::optional<std::vector<MisconceptionMatch>> misconceptions_;
};

bool applicable(const std::string& need, const FeedbackContext& ctx) {
  if (need == "any") return true;
  if (need == "formula") return ctx.student_formula && ctx.target_formula;
  if (need == "nodes") return ctx.student_nodes && ctx.correct_nodes;
  if (need == "step") return ctx.step.has_value();
  if (need == "model") return ctx.model.has_value();
  if (need == "cells") return ctx.cells.has_value();
  return false;
}

FeedbackItem item(std::string generator, Severity severity, std::string message, Json payload = nullptr) {
  return FeedbackItem{std::move(generator), severity, std::move(message), std::move(payload), 0};
}

std::string fill(std::string text, const std::string& sub, const std::string& fix) {
  for (auto [key, value] : {std::pair<std::string, std::string>{"{sub}", sub}, {"{fix}", fix}}) {
    for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size()))
      text.replace(pos, key.size(), value);
  }
  return text;
}

std::vector<FeedbackItem> gen_correctness(const FeedbackContext& ctx, Analysis& a) {
  const bool ok = a.correct();
  if (ctx.student_formula && ctx.target_formula) {
    if (ok) return {item("correctness", Severity::Success, "Your formula is correct.")};
    if (ctx.logic == Logic::PL && ctx.student_formula->is_modal())
      return {item("correctness", Severity::Error, "Modal operators are not allowed in this task.")};
    if (ctx.required_form && formulas_equivalent(ctx))
      return {item("correctness", Severity::Error,
                   "Your formula is equivalent, but it is not in " + std::string(to_string(*ctx.required_form)) + ".")};
    return {item("correctness", Severity::Error, "Your formula is not correct.")};
  }
  if (ctx.student_nodes && ctx.correct_nodes) {
    if (ok) return {item("correctness", Severity::Success, "Your formula selects exactly the right nodes.")};
    return {item("correctness", Severity::Error, "Your formula does not select the right nodes.")};
  }
  if (ctx.step) {
    if (ok) return {item("correctness", Severity::Success, ctx.step->message)};
    return {item("correctness", Severity::Error, ctx.step->message)};
  }
  if (ctx.model) {
    if (ok) return {item("correctness", Severity::Success, "The structure satisfies the formula.")};
    return {item("correctness", Severity::Error, "The structure does not satisfy the formula.")};
  }
  if (ctx.cells) {
    if (ok) return {item("correctness", Severity::Success, "All entries are correct.")};
    return {item("correctness", Severity::Error,
                 std::to_string(ctx.cells->wrong) + (ctx.cells->wrong == 1 ? " entry is" : " entries are") + " wrong.")};
  }
  if (ok) return {item("correctness", Severity::Success, "Your answer is correct.")};
  return {item("correctness", Severity::Error, "Your answer is not correct.")};
}

std::vector<FeedbackItem> gen_misconception(const std::string& id, const FeedbackContext& ctx, Analysis& a) {
  const auto& matches = a.misconceptions();
  if (matches.empty()) return {};
  const auto& m = matches.front();
  const auto& first = m.steps.front();
  const MisconceptionRule& rule = misconception_rule(first.rule);
  const Formula& student = *ctx.student_formula;
  if (id == "misconception_hint")
    return {item(id, Severity::Hint, rule.hint, Json{{"rule", rule.id}})};
  if (id == "misconception_explicit") {
    Json steps = Json::array();
    for (const auto& s : m.steps) steps.push_back(Json{{"rule", s.rule}, {"path", path_json(s.path)}});
    const std::string sub = render(subformula_at(student, first.path));
    const std::string fix = m.steps.size() == 1 ? render(subformula_at(m.rewritten, first.path)) : render(m.rewritten);
    return {item(id, Severity::Hint, fill(rule.explanation, sub, fix),
                 Json{{"rule", rule.id}, {"steps", steps}, {"corrected", render(m.rewritten)}})};
  }
  auto [begin, end] = locate(student, first.path);
  return {item(id, Severity::Hint, "The mistake is in the highlighted part of your formula.",
               Json{{"formula", render(student)},
                    {"path", path_json(first.path)},
                    {"span", Json::array({begin, end})},
                    {"subformula", render(subformula_at(student, first.path))}})};
}

std::vector<FeedbackItem> gen_normal_form(const FeedbackContext& ctx) {
  if (!ctx.required_form || in_form(*ctx.student_formula, *ctx.required_form)) return {};
  const auto form = std::string(to_string(*ctx.required_form));
  Json payload{{"form", form}};
  if (*ctx.required_form == NormalFormKind::NNF) {
    for (const auto& p : positions(*ctx.student_formula)) {
      const Formula& g = subformula_at(*ctx.student_formula, p);
      bool bad = g.op() == Op::Implies || g.op() == Op::Iff || (g.op() == Op::Not && !g.operand().is_atom());
      if (!bad) continue;
      auto [b, e] = locate(*ctx.student_formula, p);
      payload["path"] = path_json(p);
      payload["span"] = Json::array({b, e});
      payload["subformula"] = render(g);
      break;
    }
  }
  return {item("normal_form", Severity::Hint, "Your formula is not in " + form + ".", payload)};
}

std::vector<FeedbackItem> gen_subset_superset(const FeedbackContext& ctx) {
  const auto& s = *ctx.student_nodes;
  const auto& c = *ctx.correct_nodes;
  if (s == c) return {};
  const bool sub = std::includes(c.begin(), c.end(), s.begin(), s.end());
  const bool super = std::includes(s.begin(), s.end(), c.begin(), c.end());
  if (sub)
    return {item("subset_superset", Severity::Hint,
                 "Your formula selects only some of the required nodes; it is too strong.",
                 Json{{"relation", "subset"}})};
  if (super)
    return {item("subset_superset", Severity::Hint, "Your formula selects too many nodes; it is too weak.",
                 Json{{"relation", "superset"}})};
  return {item("subset_superset", Severity::Hint,
               "Your selection misses required nodes and contains wrong ones.", Json{{"relation", "incomparable"}})};
}

std::vector<FeedbackItem> gen_node_diff(const FeedbackContext& ctx) {
  const auto& s = *ctx.student_nodes;
  const auto& c = *ctx.correct_nodes;
  if (s == c) return {};
  NodeSet missing, extra;
  std::set_difference(c.begin(), c.end(), s.begin(), s.end(), std::inserter(missing, missing.end()));
  std::set_difference(s.begin(), s.end(), c.begin(), c.end(), std::inserter(extra, extra.end()));
  return {item("node_diff", Severity::Info, "Highlighted: nodes wrongly not selected and wrongly selected.",
               Json{{"missing", encode(missing)}, {"extra", encode(extra)}})};
}

std::vector<FeedbackItem> gen_step_verdict(const FeedbackContext& ctx) {
  const auto& v = *ctx.step;
  Json payload{{"accepted", v.accepted}};
  if (!v.accepted) payload["reason"] = v.reason;
  if (!v.locus.empty()) payload["locus"] = v.locus;
  return {item("step_verdict", v.accepted ? Severity::Success : Severity::Error, v.message, payload)};
}

std::vector<FeedbackItem> gen_model_trace(const FeedbackContext& ctx) {
  if (ctx.model->satisfies) return {};
  return {item("model_trace", Severity::Hint, "This is why the formula is false in your structure.",
               encode(ctx.model->trace))};
}

std::vector<FeedbackItem> gen_cell_diff(const FeedbackContext& ctx) {
  Json wrong = Json::array();
  for (std::size_t r = 0; r < ctx.cells->cells.size(); ++r)
    for (std::size_t c = 0; c < ctx.cells->cells[r].size(); ++c)
      if (!ctx.cells->cells[r][c].accepted) wrong.push_back(Json::array({r, c}));
  if (wrong.empty()) return {};
  return {item("cell_diff", Severity::Info, "The highlighted entries are wrong.", Json{{"wrong", wrong}})};
}

std::vector<FeedbackItem> run_generator(const std::string& id, const FeedbackContext& ctx, Analysis& a) {
  if (id == "correctness") return gen_correctness(ctx, a);
  if (id.rfind("misconception_", 0) == 0) return gen_misconception(id, ctx, a);
  if (id == "distinguishing_model") {
    auto i = generate_distinguishing_model(ctx);
    if (!i) return {};
    return {*i};
  }
  if (id == "normal_form") return gen_normal_form(ctx);
  if (id == "subset_superset") return gen_subset_superset(ctx);
  if (id == "node_diff") return gen_node_diff(ctx);
  if (id == "step_verdict") return gen_step_verdict(ctx);
  if (id == "model_trace") return gen_model_trace(ctx);
  if (id == "cell_diff") return gen_cell_diff(ctx);
  throw Error("unknown_generator", "unknown generator '" + id + "'", id);
}

}  // namespace

bool context_correct(const FeedbackContext& ctx) {
  if (ctx.student_formula && ctx.target_formula) {
    if (!formulas_equivalent(ctx)) return false;
    return !ctx.required_form || in_form(*ctx.student_formula, *ctx.required_form);
  }
  if (ctx.student_nodes && ctx.correct_nodes) return *ctx.student_nodes == *ctx.correct_nodes;
  if (ctx.step) return ctx.step->accepted;
  if (ctx.model) return ctx.model->satisfies;
  if (ctx.cells) return ctx.cells->all_correct();
  return ctx.correct.value_or(false);
}

std::optional<FeedbackItem> generate_distinguishing_model(const FeedbackContext& ctx) {
  if (!ctx.student_formula || !ctx.target_formula) return std::nullopt;
  const Formula& s = *ctx.student_formula;
  const Formula& t = *ctx.target_formula;
  if (ctx.logic == Logic::PL && s.is_modal()) return std::nullopt;
  auto diff = equivalent(s, t);
  if (diff.equivalent) return std::nullopt;
  if (diff.valuation) {
    Valuation v = *diff.valuation;
    for (const auto& a : atoms(s)) v.emplace(a, false);
    for (const auto& a : atoms(t)) v.emplace(a, false);
    bool sv = eval_pl(s, v);
    bool tv = eval_pl(t, v);
    return item("distinguishing_model", Severity::Info,
                std::string("Under this valuation your formula is ") + (sv ? "true" : "false") +
                    ", but a correct formula is " + (tv ? "true" : "false") + ".",
                Json{{"kind", "valuation"}, {"value", encode(v)}, {"student", sv}, {"target", tv}});
  }
  const KripkeStructure& k = *diff.model;
  bool sv = eval_ml(s, k, *k.designated);
  bool tv = eval_ml(t, k, *k.designated);
  return item("distinguishing_model", Severity::Info,
              std::string("In this pointed structure your formula is ") + (sv ? "true" : "false") +
                  ", but a correct formula is " + (tv ? "true" : "false") + ".",
              Json{{"kind", "kripke"}, {"value", encode(k)}, {"student", sv}, {"target", tv}});
}

std::vector<FeedbackItem> run_strategy(const FeedbackStrategy& strategy, const FeedbackContext& ctx) {
  Analysis analysis(ctx);
  std::vector<FeedbackItem> out;
  std::map<std::string, bool> produced_by_rule;
  std::map<std::string, bool> produced_by_generator;
  for (const auto& rule : strategy.rules) {
    bool fire = false;
    switch (rule.condition) {
      case ConditionKind::Always: fire = true; break;
      case ConditionKind::Correct: fire = analysis.correct(); break;
      case ConditionKind::Incorrect: fire = !analysis.correct(); break;
      case ConditionKind::Produced:
      case ConditionKind::Empty: {
        bool produced = produced_by_rule.count(rule.condition_target) ? produced_by_rule[rule.condition_target]
                                                                       : produced_by_generator[rule.condition_target];
        fire = (rule.condition == ConditionKind::Produced) == produced;
        break;
      }
    }
    produced_by_rule[rule.name] = false;
    if (!fire) continue;
    const auto& need = generator_registry().at(rule.generator);
    if (!applicable(need, ctx))
      throw Error("generator_mismatch",
                  "generator '" + rule.generator + "' does not apply to " + (ctx.task.empty() ? "this task" : ctx.task),
                  rule.name);
    auto items = run_generator(rule.generator, ctx, analysis);
    if (!items.empty()) {
      produced_by_rule[rule.name] = true;
      produced_by_generator[rule.generator] = true;
    }
    for (auto& i : items) {
      i.rank = static_cast<int>(out.size());
      out.push_back(std::move(i));
    }
    bool stop = rule.continuation == Continuation::Stop ||
                (rule.continuation == Continuation::StopIfCorrect && analysis.correct()) ||
                (rule.continuation == Continuation::StopIfIncorrect && !analysis.correct());
    if (stop) break;
  }
  return out;
}

std::vector<FeedbackItem> node_set_feedback(const NodeSet& student, const NodeSet& correct, const ColoredGraph& g) {
  for (const auto& n : student)
    if (!g.has_node(n)) throw Error("unknown_node", "node " + std::to_string(n) + " is not in the graph");
  for (const auto& n : correct)
    if (!g.has_node(n)) throw Error("unknown_node", "node " + std::to_string(n) + " is not in the graph");
  FeedbackContext ctx;
  ctx.task = "fo_query";
  ctx.logic = Logic::FO;
  ctx.student_nodes = student;
  ctx.correct_nodes = correct;
  ctx.graph = g;
  return run_strategy(builtin_strategy("fo_query"), ctx);
}

}  // namespace logicbench
