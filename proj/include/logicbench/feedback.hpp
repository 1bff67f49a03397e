#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "logicbench/formula.hpp"
#include "logicbench/json.hpp"
#include "logicbench/normal_form.hpp"
#include "logicbench/semantics.hpp"
#include "logicbench/tables.hpp"
#include "logicbench/verdict.hpp"

namespace logicbench {

enum class Severity { Info, Hint, Error, Success };

std::string_view to_string(Severity severity);

struct FeedbackItem {
  std::string generator;
  Severity severity = Severity::Info;
  std::string message;
  Json payload;  // null when the generator has nothing structured to show
  int rank = 0;

  friend bool operator==(const FeedbackItem&, const FeedbackItem&) = default;
};

Json encode(const FeedbackItem& item);
FeedbackItem decode_feedback_item(const Json& j, const std::string& path = "$");

// ---------------------------------------------------------------------------
// Misconceptions

struct MisconceptionRule {
  std::string id;
  std::string description;
  std::string hint;
  std::string explanation;  // explicit text; {sub} and {fix} are substituted
};

// implication_swap, and_or_confusion, negation_drop, negation_insert,
// biimplication_for_implication, box_diamond_swap
const std::vector<MisconceptionRule>& misconception_rules();
const MisconceptionRule& misconception_rule(const std::string& id);

// Rewrites the subformula at `path` according to rule `id`; nullopt when the
// rule does not apply there.
std::optional<Formula> rewrite(const std::string& id, const Formula& f, const Path& path);

struct MisconceptionStep {
  std::string rule;
  Path path;  // position in the formula the step was applied to

  friend bool operator==(const MisconceptionStep&, const MisconceptionStep&) = default;
};

struct MisconceptionMatch {
  std::vector<MisconceptionStep> steps;  // one or two
  Formula rewritten;                     // equivalent to the target
};

// Rewrites of `student` (up to two steps) that make it equivalent to
// `target`, ordered by number of steps and then by pre-order position.
// Empty when the formulas are already equivalent or have more than 10 atoms.
std::vector<MisconceptionMatch> detect_misconceptions(const Formula& student, const Formula& target,
                                                      const std::vector<MisconceptionRule>& rules);

// ---------------------------------------------------------------------------
// Strategies

enum class ConditionKind { Always, Produced, Empty, Incorrect, Correct };
enum class Continuation { Continue, Stop, StopIfCorrect, StopIfIncorrect };

struct StrategyRule {
  std::string name;
  ConditionKind condition = ConditionKind::Always;
  std::string condition_target;  // rule name or generator id for produced/empty
  std::string generator;
  Continuation continuation = Continuation::Continue;

  friend bool operator==(const StrategyRule&, const StrategyRule&) = default;
};

struct FeedbackStrategy {
  std::string name;
  std::vector<StrategyRule> rules;

  friend bool operator==(const FeedbackStrategy&, const FeedbackStrategy&) = default;
};

// One rule per non-blank line, '#' starts a comment:
//   rule <name>: when <always|produced(<ref>)|empty(<ref>)|incorrect|correct>
//       run <generator> [stop|stop_if_correct|stop_if_incorrect]
// <ref> names an earlier rule or the generator of an earlier rule.
// Throws ParseError (position = 1-based line number) on syntax errors and
// Error("unknown_generator") / Error("forward_reference").
FeedbackStrategy parse_strategy(std::string_view text);
std::string render(const FeedbackStrategy& strategy);

// Generator ids, each with the kind of context it needs.
const std::map<std::string, std::string>& generator_registry();

// Built-in strategies: "pl_construction", "ml_construction",
// "fo_query", "step", "model", "table", "transform", "default".
const FeedbackStrategy& builtin_strategy(const std::string& name);
bool has_builtin_strategy(const std::string& name);

// What a generator can look at. Which fields are set depends on the task.
struct FeedbackContext {
  std::string task;
  Logic logic = Logic::PL;

  // formula construction / transformation
  std::optional<Formula> student_formula;
  std::optional<Formula> target_formula;
  std::optional<NormalFormKind> required_form;

  // FO query construction
  std::optional<NodeSet> student_nodes;
  std::optional<NodeSet> correct_nodes;
  std::optional<ColoredGraph> graph;

  std::optional<StepVerdict> step;
  std::optional<ModelVerdict> model;
  std::optional<CellCheck> cells;

  // Used when none of the above determines correctness.
  std::optional<bool> correct;
};

// Throws Error("generator_mismatch") when a fired rule's generator cannot
// work on the context.
std::vector<FeedbackItem> run_strategy(const FeedbackStrategy& strategy, const FeedbackContext& ctx);

bool context_correct(const FeedbackContext& ctx);

// The three FO-query generators in sequence: correctness, subset/superset, node diff.
std::vector<FeedbackItem> node_set_feedback(const NodeSet& student, const NodeSet& correct, const ColoredGraph& g);

// Distinguishing interpretation for a wrong formula; nullopt for equivalent formulas.
std::optional<FeedbackItem> generate_distinguishing_model(const FeedbackContext& ctx);

}  // namespace logicbench
