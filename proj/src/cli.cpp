#include "logicbench/cli.hpp"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "logicbench/error.hpp"
#include "logicbench/exercise.hpp"
#include "logicbench/reasoning.hpp"
#include "logicbench/service.hpp"
#include "logicbench/syntax.hpp"

namespace fs = std::filesystem;

namespace logicbench {

namespace {

// Missing or unreadable input: a usage error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

// Literal text, or the contents of a file of that name.
std::string input_text(const std::string& input) {
  std::error_code ec;
  if (fs::is_regular_file(input, ec)) return read_file(input);
  return input;
}

Json parse_json_file(const std::string& path) {
  auto text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": not valid JSON: " + e.what());
  }
}

std::string render_valuation(const Valuation& v) {
  std::string out;
  for (const auto& [atom, value] : v) out += (out.empty() ? "" : " ") + atom + "=" + (value ? "1" : "0");
  return out.empty() ? "(empty)" : out;
}

std::string render_relation(const BisimRelation& r) {
  std::string out;
  for (const auto& [a, b] : r) out += (out.empty() ? "" : " ") + std::string("(") + a + "," + b + ")";
  return out.empty() ? "(empty)" : out;
}

std::string render_item(const FeedbackItem& item) {
  return "[" + std::to_string(item.rank) + " " + item.generator + "/" + std::string(to_string(item.severity)) + "] " +
         item.message;
}

int cmd_validate(const std::vector<std::string>& paths, bool json, std::ostream& out) {
  Json report = Json::array();
  bool all_ok = true;
  for (const auto& path : paths) {
    Json entry{{"file", path}};
    Json errors = Json::array();
    try {
      auto spec = load_exercise(parse_json_file(path));
      for (const auto& e : validate_exercise(spec))
        errors.push_back(Json{{"task", e.task}, {"reason", e.reason}, {"message", e.message}});
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      errors.push_back(Json{{"task", ""}, {"reason", e.code()}, {"message", std::string(e.what()) + " at " + e.locus()}});
    }
    all_ok = all_ok && errors.empty();
    entry["ok"] = errors.empty();
    entry["errors"] = errors;
    report.push_back(entry);
    if (json) continue;
    if (errors.empty()) {
      out << path << ": ok\n";
    } else {
      for (const auto& e : errors) {
        out << path << ": ";
        if (!e["task"].get<std::string>().empty()) out << "[" << e["task"].get<std::string>() << "] ";
        out << e["reason"].get<std::string>() << ": " << e["message"].get<std::string>() << "\n";
      }
    }
  }
  if (json) out << report.dump(2) << "\n";
  return all_ok ? kExitOk : kExitFailure;
}

int cmd_solve(const std::string& kind, const std::string& input, bool json, std::ostream& out) {
  const std::string text = input_text(input);
  Json result;
  std::ostringstream plain;
  if (kind == "sat") {
    auto r = pl_satisfiable(parse_formula(text, Logic::PL));
    result = Json{{"satisfiable", r.satisfiable}};
    plain << (r.satisfiable ? "satisfiable" : "unsatisfiable") << "\n";
    if (r.valuation) {
      result["witness"] = encode(*r.valuation);
      plain << "witness: " << render_valuation(*r.valuation) << "\n";
    }
  } else if (kind == "mlsat") {
    auto r = ml_satisfiable(parse_formula(text, Logic::ML));
    result = Json{{"satisfiable", r.satisfiable}};
    plain << (r.satisfiable ? "satisfiable" : "unsatisfiable") << "\n";
    if (r.model) {
      result["witness"] = encode(*r.model);
      plain << "witness: " << encode(*r.model).dump() << "\n";
    }
  } else if (kind == "horn") {
    auto r = horn_mark(parse_formula(text, Logic::PL));
    result = Json{{"marked", r.marked}, {"satisfiable", r.satisfiable}};
    std::string marked;
    for (const auto& m : r.marked) marked += (marked.empty() ? "" : ", ") + m;
    plain << "marked: " << (marked.empty() ? "(none)" : marked) << "\n"
          << (r.satisfiable ? "satisfiable" : "unsatisfiable") << "\n";
    if (r.witness) {
      result["witness"] = encode(*r.witness);
      plain << "witness: " << render_valuation(*r.witness) << "\n";
    }
  } else if (kind == "bisim") {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw Error("schema_violation", std::string("expected {\"left\": ..., \"right\": ...}: ") + e.what(), "$");
    }
    auto left = decode_kripke(require(doc, "left", "$"), "$.left");
    auto right = decode_kripke(require(doc, "right", "$"), "$.right");
    auto r = max_bisimulation(left, right);
    result = Json{{"relation", encode(r)}};
    plain << "maximal bisimulation: " << render_relation(r) << "\n";
    if (left.designated && right.designated) {
      bool related = r.count({*left.designated, *right.designated}) > 0;
      result["designated_bisimilar"] = related;
      plain << "designated worlds " << (related ? "bisimilar" : "not bisimilar") << "\n";
    }
  } else if (kind == "table") {
    Formula f = parse_formula(text, Logic::PL);
    auto atoms_set = atoms(f);
    auto table = build_truth_table(f, {atoms_set.begin(), atoms_set.end()});
    result = Json{{"table", encode(table)}};
    for (const auto& a : table.atoms) plain << a << " | ";
    for (std::size_t c = 0; c < table.columns.size(); ++c) plain << (c ? " | " : "") << render(table.columns[c]);
    plain << "\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      auto v = row_valuation(table.atoms, r);
      for (const auto& a : table.atoms) plain << (v.at(a) ? "1" : "0") << " | ";
      for (std::size_t c = 0; c < row.size(); ++c) {
        plain << (row[c] ? "1" : "0");
        if (c + 1 < row.size()) plain << " | ";
      }
      plain << "\n";
    }
  } else {
    throw UsageError("unknown solver '" + kind + "'");
  }
  out << (json ? result.dump(2) + "\n" : plain.str());
  return kExitOk;
}

int cmd_grade(const std::string& exercise_path, const std::string& submissions_path, bool json, std::ostream& out) {
  ExerciseSpec spec = load_exercise(parse_json_file(exercise_path));
  auto problems = validate_exercise(spec);
  if (!problems.empty()) {
    for (const auto& e : problems) out << exercise_path << ": [" << e.task << "] " << e.reason << ": " << e.message << "\n";
    return kExitFailure;
  }

  // A JSON array of submissions, or a service event log (JSON lines).
  std::vector<Json> events;
  std::string session_id = "replay";
  if (fs::path(submissions_path).extension() == ".jsonl") {
    std::istringstream in(read_file(submissions_path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      Json event;
      try {
        event = Json::parse(line);
      } catch (const Json::parse_error& e) {
        throw UsageError(submissions_path + ": malformed event line: " + e.what());
      }
      if (!event.is_object() || !event.contains("type")) throw UsageError(submissions_path + ": event without type");
      if (event["type"] == "start") {
        if (event.contains("session") && event["session"].is_string()) session_id = event["session"];
        continue;
      }
      events.push_back(std::move(event));
    }
  } else {
    Json doc = parse_json_file(submissions_path);
    if (!doc.is_array()) throw UsageError(submissions_path + ": expected an array of submissions");
    for (auto& s : doc) events.push_back(Json{{"type", "submit"}, {"submission", s}});
  }

  SessionState session = start_session(spec, session_id);
  Json steps = Json::array();
  int index = 0;
  for (const auto& event : events) {
    ++index;
    const std::string task = session.current;
    Json step{{"index", index}, {"task", task.empty() ? Json(nullptr) : Json(task)}};
    try {
      if (event["type"] == "reveal") {
        auto item = reveal_next(session);
        step["reveal"] = item ? encode(*item) : Json(nullptr);
        if (!json) out << "#" << index << " " << task << ": reveal " << (item ? render_item(*item) : "(nothing)") << "\n";
      } else {
        auto result = submit(spec, session, event.at("submission"));
        Json feedback = Json::array();
        for (const auto& f : result.feedback) feedback.push_back(encode(f));
        step["accepted"] = result.accepted;
        step["transition"] = to_string(result.transition.type);
        if (!result.transition.task.empty()) step["next"] = result.transition.task;
        step["feedback"] = feedback;
        if (!json) {
          out << "#" << index << " " << task << ": " << (result.accepted ? "accepted" : "rejected") << ", "
              << to_string(result.transition.type);
          if (!result.transition.task.empty()) out << " -> " << result.transition.task;
          out << "\n";
          for (const auto& f : result.feedback) out << "    " << render_item(f) << "\n";
        }
      }
    } catch (const Error& e) {
      step["error"] = Json{{"code", e.code()}, {"message", e.what()}, {"locus", e.locus()}};
      if (!json) out << "#" << index << " " << task << ": error " << e.code() << ": " << e.what() << "\n";
    }
    steps.push_back(step);
  }
  if (json) {
    out << Json{{"exercise", spec.id}, {"steps", steps}, {"final", encode(session)}}.dump(2) << "\n";
  } else {
    out << (session.status == SessionStatus::Finished ? "finished" : "active at " + session.current) << "\n";
  }
  return kExitOk;
}

int cmd_usage(const std::string& path, bool json, std::ostream& out) {
  std::istringstream in(read_file(path));
  auto report = compute_usage(read_access_log(in));
  if (json) {
    out << encode(report).dump(2) << "\n";
    return kExitOk;
  }
  int total = 0;
  for (const auto& [day, n] : report) {
    out << day << " " << n << "\n";
    total += n;
  }
  out << "total " << total << "\n";
  return kExitOk;
}

int cmd_serve(const ServerOptions& options, std::ostream& out) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Server server(options);
  int port = server.bind();
  out << "listening on http://" << options.host << ":" << port << std::endl;
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  server.listen();
  // listen() also returns on bind-level failures; wake the waiter either way.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"logicbench: exercises, solvers and grading for logic teaching"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "check exercise files");
  validate->add_option("files", validate_paths)->required();

  std::string solve_kind, solve_input;
  auto* solve = app.add_subcommand("solve", "run a reference solver");
  solve->add_option("kind", solve_kind)->required()->check(CLI::IsMember({"sat", "mlsat", "horn", "bisim", "table"}));
  solve->add_option("input", solve_input, "formula text, JSON text or a file")->required();

  std::string grade_exercise, grade_submissions;
  auto* grade = app.add_subcommand("grade", "replay recorded submissions");
  grade->add_option("exercise", grade_exercise)->required();
  grade->add_option("submissions", grade_submissions, "JSON array of submissions or a .jsonl event log")->required();

  std::string usage_log;
  auto* usage = app.add_subcommand("usage", "sessions per day from an access log");
  usage->add_option("log", usage_log)->required();

  ServerOptions serve_options;
  std::string data_dir = "data", exercise_dir = "exercises", static_dir;
  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  serve->add_option("--host", serve_options.host)->capture_default_str();
  serve->add_option("--port", serve_options.port, "0 picks a free port")->capture_default_str();
  serve->add_option("--data", data_dir, "session store and access log")->capture_default_str()->envname("LOGICBENCH_DATA");
  serve->add_option("--exercises", exercise_dir)->capture_default_str()->envname("LOGICBENCH_EXERCISES");
  serve->add_option("--static", static_dir, "web client bundle");

  for (auto* sub : {validate, solve, grade, usage, serve}) sub->add_flag("--json", json, "machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(validate_paths, json, out);
    if (*solve) return cmd_solve(solve_kind, solve_input, json, out);
    if (*grade) return cmd_grade(grade_exercise, grade_submissions, json, out);
    if (*usage) return cmd_usage(usage_log, json, out);
    if (*serve) {
      serve_options.data_dir = data_dir;
      serve_options.exercise_dir = exercise_dir;
      if (!static_dir.empty()) serve_options.static_dir = static_dir;
      return cmd_serve(serve_options, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.code() << " at " << e.position() << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what();
    if (!e.locus().empty()) err << " (" << e.locus() << ")";
    err << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace logicbench
