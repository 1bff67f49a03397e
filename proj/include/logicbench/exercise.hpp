#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "logicbench/bisimulation.hpp"
#include "logicbench/feedback.hpp"
#include "logicbench/horn.hpp"
#include "logicbench/json.hpp"
#include "logicbench/resolution.hpp"
#include "logicbench/tableau.hpp"

namespace logicbench {

enum class TaskKind {
  ConstructFormula,
  ConstructModel,
  Evaluate,
  Transform,
  TruthTable,
  HornSat,
  Tableau,
  ResolutionPL,
  ResolutionFO,
  Bisimulation,
  DistinguishWorlds,
  MultipleChoice,
  Messaging,
  ChooseVariables,
  FoQuery,
};

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> task_kind_from_string(std::string_view text);

enum class ValueKind {
  Formula,
  FoFormula,
  ClauseSet,
  Valuation,
  Kripke,
  Graph,
  NodeSet,
  Boolean,
  Choice,
  Text,
  Variables,
  Relation,
};

std::string_view to_string(ValueKind kind);
std::optional<ValueKind> value_kind_from_string(std::string_view text);

using TaskValueData = std::variant<Formula, FoFormula, ClauseSet, Valuation, KripkeStructure, ColoredGraph, NodeSet,
                                   bool, long long, std::string, std::set<std::string>, BisimRelation>;

struct TaskValue {
  ValueKind kind = ValueKind::Boolean;
  TaskValueData data = false;

  static TaskValue formula(Formula f) { return {ValueKind::Formula, std::move(f)}; }
  static TaskValue boolean(bool b) { return {ValueKind::Boolean, b}; }
  static TaskValue choice(long long i) { return {ValueKind::Choice, i}; }

  template <class T>
  const T& as() const { return std::get<T>(data); }

  friend bool operator==(const TaskValue&, const TaskValue&) = default;
};

Json encode(const TaskValue& v);  // {"kind": ..., "value": ...}
// Formulas are read as modal text unless the document says "logic": "PL".
TaskValue decode_task_value(const Json& j, const std::string& path = "$");
TaskValue decode_task_value(ValueKind kind, const Json& value, const std::string& path = "$");
std::string render(const TaskValue& v);

// Where an input comes from.
struct Binding {
  enum class Source { Literal, Reference, Template };

  Source source = Source::Literal;
  std::optional<TaskValue> literal;
  std::string task;  // Reference
  std::string port;  // Reference
  std::string text;  // Template, with $ref:task.port placeholders
  ValueKind kind = ValueKind::Formula;  // Template result kind

  friend bool operator==(const Binding&, const Binding&) = default;
};

struct Guard {
  enum class Type { Always, Choice, Bool };

  Type type = Type::Always;
  std::string task;  // Choice: the multiple-choice task; Bool: referenced task
  std::string port;  // Bool
  long long choice = 0;
  bool value = false;

  friend bool operator==(const Guard&, const Guard&) = default;
};

struct Branch {
  Guard when;
  std::string next;

  friend bool operator==(const Branch&, const Branch&) = default;
};

struct TaskSpec {
  std::string id;
  TaskKind kind = TaskKind::Messaging;
  std::string prompt;
  std::map<std::string, Binding> inputs;
  std::map<std::string, ValueKind> outputs;
  Json config = Json::object();
  std::optional<std::string> next;  // default transition; none with no branches = terminal
  std::vector<Branch> branches;     // tried in order before `next`

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct ExerciseSpec {
  std::string id;
  std::string title;
  std::vector<TaskSpec> tasks;
  std::map<std::string, std::string> strategies;  // custom strategy name -> DSL text

  const TaskSpec* find(const std::string& task) const;
  const TaskSpec& task(const std::string& task) const;

  friend bool operator==(const ExerciseSpec&, const ExerciseSpec&) = default;
};

struct PortSignature {
  std::set<ValueKind> accepts;
  bool required = true;
};

struct KindSignature {
  std::map<std::string, PortSignature> inputs;
  std::map<std::string, std::set<ValueKind>> outputs;  // admissible declarations per port
  bool step_task = false;
};

const KindSignature& signature(TaskKind kind);

struct ValidationError {
  std::string task;  // empty for exercise-level problems
  std::string reason;
  std::string message;

  friend bool operator==(const ValidationError&, const ValidationError&) = default;
};

std::vector<ValidationError> validate_exercise(const ExerciseSpec& spec);

// Throws Error("schema_violation") with the JSON path as locus.
ExerciseSpec load_exercise(const Json& document);
Json serialize_exercise(const ExerciseSpec& spec);

using ProofState = std::variant<Tableau, ResolutionGraph, HornMarkingState, BisimulationState>;

Json encode(const ProofState& p);

struct TaskProgress {
  std::map<std::string, TaskValue> inputs;  // resolved when the task was entered
  std::optional<ProofState> proof;
  std::vector<FeedbackItem> feedback;  // of the last submission
  int revealed = -1;                   // highest revealed rank
  int submissions = 0;
  int accepted_steps = 0;

  friend bool operator==(const TaskProgress&, const TaskProgress&) = default;
};

enum class SessionStatus { Active, Finished };

std::string_view to_string(SessionStatus status);

struct SessionState {
  std::string exercise_id;
  std::string session_id;
  std::string current;  // empty once finished
  SessionStatus status = SessionStatus::Active;
  std::map<std::string, TaskValue> environment;  // "task.port" -> value
  std::map<std::string, TaskProgress> progress;
  std::vector<std::string> completed;

  friend bool operator==(const SessionState&, const SessionState&) = default;
};

// Throws Error("invalid_exercise") listing the validation errors.
SessionState start_session(const ExerciseSpec& spec, std::string session_id);

struct Transition {
  enum class Type { Stay, Advance, Finish };
  Type type = Type::Stay;
  std::string task;  // Advance
};

std::string_view to_string(Transition::Type type);

struct SubmitResult {
  bool accepted = false;  // the answer or step was accepted
  std::vector<FeedbackItem> feedback;
  Transition transition;
};

// `submission` is {"kind": ..., "value": ...}, a bare value of the task's
// answer kind under "value", or {"step": {...}} for proof tasks.
// Throws Error("session_finished"), Error("kind_mismatch") and
// Error("schema_violation"); a throw leaves the session unchanged.
SubmitResult submit(const ExerciseSpec& spec, SessionState& session, const Json& submission);

// Next feedback item of the last submission; nullopt when nothing is left.
std::optional<FeedbackItem> reveal_next(SessionState& session);

// Session snapshot as sent to clients and stored on disk. decode_session
// re-checks proof states.
Json encode(const SessionState& s);
SessionState decode_session(const Json& j, const std::string& path = "$");

// Descriptor of the current task: id, kind, prompt, resolved inputs,
// client-visible config and proof state.
Json describe_task(const ExerciseSpec& spec, const SessionState& session);

}  // namespace logicbench
