#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "logicbench/exercise.hpp"

namespace logicbench {

// ---------------------------------------------------------------------------
// Usage analytics

using TimePoint = std::chrono::sys_seconds;

struct Access {
  std::string client;
  TimePoint time;

  friend bool operator==(const Access&, const Access&) = default;
};

// Calendar day (YYYY-MM-DD, UTC) -> number of sessions that started that day.
using UsageReport = std::map<std::string, int>;

inline constexpr std::chrono::minutes kSessionGap{30};

// A session is a maximal run of one client's accesses whose consecutive gaps
// are shorter than kSessionGap; it counts for the day of its first access.
UsageReport compute_usage(std::vector<Access> log);

// "2026-10-15T10:00:00Z"; throws Error("schema_violation") on other shapes.
TimePoint parse_timestamp(const std::string& text, const std::string& path = "$");
std::string format_timestamp(TimePoint t);
std::string format_day(TimePoint t);

// One JSON object per line: {"client": ..., "time": ...}. Blank lines are skipped.
std::vector<Access> read_access_log(std::istream& in);
Json encode(const Access& a);
Json encode(const UsageReport& r);

// ---------------------------------------------------------------------------
// Exercises and sessions

// Validated exercises, immutable once loaded.
class ExerciseCatalog {
 public:
  // Loads every *.json in `dir`. Throws Error("invalid_exercise") naming the
  // file when one does not load or validate.
  static ExerciseCatalog load_directory(const std::filesystem::path& dir);
  void add(ExerciseSpec spec);

  const ExerciseSpec* find(const std::string& id) const;
  const std::map<std::string, std::shared_ptr<const ExerciseSpec>>& all() const noexcept { return specs_; }

 private:
  std::map<std::string, std::shared_ptr<const ExerciseSpec>> specs_;
};

struct StoredSession {
  SessionState state;
  TimePoint created;
  TimePoint updated;
  std::size_t events = 0;  // lines in the event log, the start event included

  friend bool operator==(const StoredSession&, const StoredSession&) = default;
};

// Sessions persisted under <data>/sessions/<id>/: events.jsonl holds every
// state-changing request (fsynced before the reply), snapshot.json the state
// after the latest one (written atomically). Recovery loads the snapshot and
// replays the events it does not cover yet.
class SessionStore {
 public:
  using Clock = std::function<TimePoint()>;

  SessionStore(std::filesystem::path data_dir, const ExerciseCatalog& catalog, Clock clock = {});

  StoredSession create(const std::string& exercise_id);
  StoredSession get(const std::string& session_id) const;
  std::vector<std::string> ids() const;

  std::pair<SubmitResult, StoredSession> submit(const std::string& session_id, const Json& submission);
  std::pair<FeedbackItem, StoredSession> reveal(const std::string& session_id);

 private:
  struct Slot {
    std::mutex mutex;
    StoredSession session;
  };

  std::shared_ptr<Slot> slot(const std::string& session_id) const;
  const ExerciseSpec& spec_for(const SessionState& s) const;
  void recover();
  void append_event(const std::string& session_id, const Json& event) const;
  void write_snapshot(const StoredSession& s) const;
  std::filesystem::path session_dir(const std::string& session_id) const;

  std::filesystem::path dir_;
  const ExerciseCatalog& catalog_;
  Clock clock_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

// 128 random bits as 32 lowercase hex digits.
std::string random_id();

// Applies one logged event to a session; used by recovery and replay tools.
void apply_event(const ExerciseSpec& spec, SessionState& state, const Json& event);

// ---------------------------------------------------------------------------
// HTTP

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir = "data";
  std::filesystem::path exercise_dir = "exercises";
  std::optional<std::filesystem::path> static_dir;  // web client bundle
};

// Client-visible session: everything but unrevealed feedback.
Json session_view(const ExerciseSpec& spec, const StoredSession& s);

// HTTP status for an engine error code.
int http_status(const std::string& code);

class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();

  // Binds and returns the port; the server runs until stop().
  int bind();
  void listen();  // blocks
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace logicbench
