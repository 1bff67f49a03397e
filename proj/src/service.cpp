#include "logicbench/service.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "logicbench/error.hpp"

namespace fs = std::filesystem;

namespace logicbench {

// ---------------------------------------------------------------------------
// Usage

TimePoint parse_timestamp(const std::string& text, const std::string& path) {
  int y, mo, d, h, mi, s;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &tail) != 7 || tail != 'Z' ||
      text.size() != 20)
    schema_error(path, "expected a UTC timestamp like 2026-10-15T10:00:00Z");
  std::chrono::year_month_day day{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!day.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0) schema_error(path, "invalid date or time");
  return std::chrono::sys_days{day} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{s};
}

std::string format_day(TimePoint t) {
  std::chrono::year_month_day day{std::chrono::floor<std::chrono::days>(t)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(day.year()), static_cast<unsigned>(day.month()),
                static_cast<unsigned>(day.day()));
  return buf;
}

std::string format_timestamp(TimePoint t) {
  auto midnight = std::chrono::floor<std::chrono::days>(t);
  std::chrono::hh_mm_ss clock{t - midnight};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(clock.hours().count()),
                static_cast<int>(clock.minutes().count()), static_cast<int>(clock.seconds().count()));
  return format_day(t) + buf;
}

UsageReport compute_usage(std::vector<Access> log) {
  std::sort(log.begin(), log.end(),
            [](const Access& a, const Access& b) { return std::tie(a.client, a.time) < std::tie(b.client, b.time); });
  UsageReport report;
  for (std::size_t i = 0; i < log.size(); ++i) {
    bool starts = i == 0 || log[i].client != log[i - 1].client || log[i].time - log[i - 1].time >= kSessionGap;
    if (starts) ++report[format_day(log[i].time)];
  }
  return report;
}

std::vector<Access> read_access_log(std::istream& in) {
  std::vector<Access> log;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string path = "line " + std::to_string(n);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw Error("schema_violation", std::string("not JSON: ") + e.what(), path);
    }
    expect_object(j, path);
    Access a;
    a.client = expect_string(require(j, "client", path), path + ".client");
    const Json& time = require(j, "time", path);
    if (time.is_number_integer())
      a.time = TimePoint{std::chrono::seconds{time.get<long long>()}};
    else
      a.time = parse_timestamp(expect_string(time, path + ".time"), path + ".time");
    log.push_back(std::move(a));
  }
  return log;
}

Json encode(const Access& a) { return Json{{"client", a.client}, {"time", format_timestamp(a.time)}}; }

Json encode(const UsageReport& r) {
  Json days = Json::object();
  int total = 0;
  for (const auto& [day, n] : r) {
    days[day] = n;
    total += n;
  }
  return Json{{"days", days}, {"total", total}};
}

// ---------------------------------------------------------------------------
// Catalog

ExerciseCatalog ExerciseCatalog::load_directory(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error("io_error", "no exercise directory " + dir.string(), dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  ExerciseCatalog catalog;
  for (const auto& file : files) {
    std::ifstream in(file);
    try {
      catalog.add(load_exercise(Json::parse(in)));
    } catch (const std::exception& e) {
      throw Error("invalid_exercise", file.string() + ": " + e.what(), file.string());
    }
  }
  return catalog;
}

void ExerciseCatalog::add(ExerciseSpec spec) {
  auto errors = validate_exercise(spec);
  if (!errors.empty())
    throw Error("invalid_exercise", "exercise " + spec.id + ": " + errors.front().message, spec.id);
  if (specs_.count(spec.id)) throw Error("invalid_exercise", "duplicate exercise id " + spec.id, spec.id);
  auto id = spec.id;
  specs_[id] = std::make_shared<const ExerciseSpec>(std::move(spec));
}

const ExerciseSpec* ExerciseCatalog::find(const std::string& id) const {
  auto it = specs_.find(id);
  return it == specs_.end() ? nullptr : it->second.get();
}

// ---------------------------------------------------------------------------
// Store

std::string random_id() {
  static std::mutex mutex;
  static std::random_device device;
  std::lock_guard lock(mutex);
  std::string id;
  for (int i = 0; i < 4; ++i) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", static_cast<unsigned>(device()));
    id += buf;
  }
  return id;
}

void apply_event(const ExerciseSpec& spec, SessionState& state, const Json& event) {
  auto type = expect_string(require(event, "type", "$"), "$.type");
  if (type == "submit") {
    submit(spec, state, require(event, "submission", "$"));
  } else if (type == "reveal") {
    if (!reveal_next(state)) throw Error("replay_mismatch", "logged reveal has nothing to reveal", state.session_id);
  } else {
    schema_error("$.type", "unknown event type '" + type + "'");
  }
}

namespace {

void write_all(int fd, const std::string& data, const fs::path& file) {
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    ssize_t n = ::write(fd, p, left);
    if (n < 0) throw Error("io_error", "cannot write " + file.string(), file.string());
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

void sync_directory(const fs::path& dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd >= 0) {
    ::fsync(fd);
    ::close(fd);
  }
}

void write_atomically(const fs::path& file, const std::string& data) {
  fs::path tmp = file;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw Error("io_error", "cannot open " + tmp.string(), tmp.string());
  write_all(fd, data, tmp);
  ::fsync(fd);
  ::close(fd);
  fs::rename(tmp, file);
  sync_directory(file.parent_path());
}

Json snapshot_json(const StoredSession& s) {
  return Json{{"created", format_timestamp(s.created)},
              {"updated", format_timestamp(s.updated)},
              {"events", s.events},
              {"state", encode(s.state)}};
}

TimePoint system_now() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

}  // namespace

SessionStore::SessionStore(fs::path data_dir, const ExerciseCatalog& catalog, Clock clock)
    : dir_(std::move(data_dir)), catalog_(catalog), clock_(clock ? std::move(clock) : Clock(system_now)) {
  fs::create_directories(dir_ / "sessions");
  recover();
}

fs::path SessionStore::session_dir(const std::string& id) const { return dir_ / "sessions" / id; }

const ExerciseSpec& SessionStore::spec_for(const SessionState& s) const {
  const auto* spec = catalog_.find(s.exercise_id);
  if (!spec) throw Error("unknown_exercise", "no exercise " + s.exercise_id, s.exercise_id);
  return *spec;
}

void SessionStore::append_event(const std::string& id, const Json& event) const {
  fs::path file = session_dir(id) / "events.jsonl";
  int fd = ::open(file.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
  if (fd < 0) throw Error("io_error", "cannot open " + file.string(), file.string());
  write_all(fd, event.dump() + "\n", file);
  ::fsync(fd);
  ::close(fd);
}

void SessionStore::write_snapshot(const StoredSession& s) const {
  write_atomically(session_dir(s.state.session_id) / "snapshot.json", snapshot_json(s).dump());
}

void SessionStore::recover() {
  for (const auto& entry : fs::directory_iterator(dir_ / "sessions")) {
    if (!entry.is_directory()) continue;
    const std::string id = entry.path().filename().string();
    fs::path log_file = entry.path() / "events.jsonl";
    std::ifstream in(log_file, std::ios::binary);
    if (!in) continue;

    // Keep the longest prefix of complete, parsable lines; a torn tail was
    // never acknowledged.
    std::vector<Json> events;
    std::size_t valid_bytes = 0;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t pos = 0;
    while (pos < content.size()) {
      auto end = content.find('\n', pos);
      if (end == std::string::npos) break;
      try {
        events.push_back(Json::parse(content.substr(pos, end - pos)));
      } catch (const Json::parse_error&) {
        break;
      }
      pos = end + 1;
      valid_bytes = pos;
    }
    if (valid_bytes < content.size()) fs::resize_file(log_file, valid_bytes);
    if (events.empty()) continue;

    const Json& start = events.front();
    auto slot = std::make_shared<Slot>();
    StoredSession& s = slot->session;
    std::size_t from = 1;
    fs::path snapshot_file = entry.path() / "snapshot.json";
    bool have_snapshot = false;
    if (fs::exists(snapshot_file)) {
      std::ifstream sin(snapshot_file);
      Json snap = Json::parse(sin);
      std::size_t covered = snap["events"].get<std::size_t>();
      if (covered <= events.size()) {
        s.state = decode_session(snap["state"], "$.state");
        s.created = parse_timestamp(snap["created"].get<std::string>());
        s.updated = parse_timestamp(snap["updated"].get<std::string>());
        s.events = covered;
        from = covered;
        have_snapshot = true;
      }
    }
    if (!have_snapshot) {
      const auto* spec = catalog_.find(start["exercise"].get<std::string>());
      if (!spec) continue;
      s.state = start_session(*spec, id);
      s.created = s.updated = parse_timestamp(start["time"].get<std::string>());
      s.events = 1;
    }
    const ExerciseSpec& spec = spec_for(s.state);
    for (std::size_t i = from; i < events.size(); ++i) {
      apply_event(spec, s.state, events[i]);
      s.updated = parse_timestamp(events[i]["time"].get<std::string>());
      s.events = i + 1;
    }
    if (!have_snapshot || from < events.size()) write_snapshot(s);
    sessions_[id] = slot;
  }
}

std::shared_ptr<SessionStore::Slot> SessionStore::slot(const std::string& id) const {
  std::shared_lock lock(map_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error("unknown_session", "no session " + id, id);
  return it->second;
}

StoredSession SessionStore::create(const std::string& exercise_id) {
  const auto* spec = catalog_.find(exercise_id);
  if (!spec) throw Error("unknown_exercise", "no exercise " + exercise_id, exercise_id);
  auto slot = std::make_shared<Slot>();
  std::string id;
  {
    std::shared_lock lock(map_mutex_);
    do id = random_id();
    while (sessions_.count(id));
  }
  StoredSession& s = slot->session;
  s.state = start_session(*spec, id);
  s.created = s.updated = clock_();
  s.events = 1;
  fs::create_directories(session_dir(id));
  append_event(id, Json{{"type", "start"}, {"exercise", exercise_id}, {"session", id},
                        {"time", format_timestamp(s.created)}});
  write_snapshot(s);
  std::unique_lock lock(map_mutex_);
  sessions_[id] = slot;
  return s;
}

StoredSession SessionStore::get(const std::string& id) const {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  return s->session;
}

std::vector<std::string> SessionStore::ids() const {
  std::shared_lock lock(map_mutex_);
  std::vector<std::string> out;
  for (const auto& [id, slot] : sessions_) out.push_back(id);
  return out;
}

std::pair<SubmitResult, StoredSession> SessionStore::submit(const std::string& id, const Json& submission) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  StoredSession next = s->session;
  SubmitResult result = logicbench::submit(spec_for(next.state), next.state, submission);
  next.updated = clock_();
  ++next.events;
  append_event(id, Json{{"type", "submit"}, {"submission", submission}, {"time", format_timestamp(next.updated)}});
  write_snapshot(next);
  s->session = next;
  return {std::move(result), std::move(next)};
}

std::pair<FeedbackItem, StoredSession> SessionStore::reveal(const std::string& id) {
  auto s = slot(id);
  std::lock_guard lock(s->mutex);
  StoredSession next = s->session;
  auto item = reveal_next(next.state);
  if (!item) throw Error("nothing_to_reveal", "no further feedback for the current task", id);
  next.updated = clock_();
  ++next.events;
  append_event(id, Json{{"type", "reveal"}, {"time", format_timestamp(next.updated)}});
  write_snapshot(next);
  s->session = next;
  return {std::move(*item), std::move(next)};
}

// ---------------------------------------------------------------------------
// HTTP

int http_status(const std::string& code) {
  if (code == "unknown_exercise" || code == "unknown_session" || code == "not_found") return 404;
  if (code == "kind_mismatch" || code == "session_finished" || code == "nothing_to_reveal") return 409;
  if (code == "io_error" || code == "internal_error") return 500;
  return 422;
}

Json session_view(const ExerciseSpec& spec, const StoredSession& s) {
  Json env = Json::object();
  for (const auto& [key, v] : s.state.environment) env[key] = encode(v);
  return Json{{"id", s.state.session_id},
              {"exercise", s.state.exercise_id},
              {"status", to_string(s.state.status)},
              {"current", s.state.current.empty() ? Json(nullptr) : Json(s.state.current)},
              {"completed", s.state.completed},
              {"environment", env},
              {"created", format_timestamp(s.created)},
              {"updated", format_timestamp(s.updated)},
              {"task", describe_task(spec, s.state)}};
}

struct Server::Impl {
  ServerOptions options;
  ExerciseCatalog catalog;
  std::unique_ptr<SessionStore> store;
  httplib::Server http;
  std::mutex log_mutex;
  std::ofstream access_log;

  void log_access(const std::string& client) {
    std::lock_guard lock(log_mutex);
    access_log << encode(Access{client, system_now()}).dump() << '\n' << std::flush;
  }

  std::string client_of(const httplib::Request& req, httplib::Response& res) {
    std::string client = req.get_header_value("X-Client-Id");
    if (client.empty()) client = random_id();
    res.set_header("X-Client-Id", client);
    return client;
  }

  static void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void fail(httplib::Response& res, const std::string& code, const std::string& message,
                   const std::string& locus) {
    reply(res, http_status(code), Json{{"code", code}, {"message", message}, {"locus", locus}});
  }

  // Runs `f`, mapping engine errors to JSON error replies.
  template <class F>
  auto guarded(F f, bool logged = true) {
    return [this, f, logged](const httplib::Request& req, httplib::Response& res) {
      try {
        std::string client = client_of(req, res);
        if (logged) log_access(client);
        f(req, res);
      } catch (const Error& e) {
        fail(res, e.code(), e.what(), e.locus());
      } catch (const Json::exception& e) {
        fail(res, "invalid_json", e.what(), "$");
      } catch (const std::exception& e) {
        fail(res, "internal_error", e.what(), "");
      }
    };
  }

  const ExerciseSpec& spec_of(const StoredSession& s) const { return *catalog.find(s.state.exercise_id); }

  void routes() {
    http.Get("/health", guarded(
                            [this](const httplib::Request&, httplib::Response& res) {
                              reply(res, 200,
                                    Json{{"status", "ok"},
                                         {"exercises", catalog.all().size()},
                                         {"sessions", store->ids().size()}});
                            },
                            false));

    http.Get("/exercises", guarded([this](const httplib::Request&, httplib::Response& res) {
      Json list = Json::array();
      for (const auto& [id, spec] : catalog.all())
        list.push_back(Json{{"id", id}, {"title", spec->title}, {"tasks", spec->tasks.size()}});
      reply(res, 200, list);
    }));

    http.Post(R"(/exercises/([^/]+)/sessions)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = store->create(req.matches[1]);
      reply(res, 201, session_view(spec_of(s), s));
    }));

    http.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto s = store->get(req.matches[1]);
      reply(res, 200, session_view(spec_of(s), s));
    }));

    http.Post(R"(/sessions/([^/]+)/submit)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      store->get(req.matches[1]);  // 404 before body errors
      Json body = Json::parse(req.body);
      auto [result, s] = store->submit(req.matches[1], body);
      Json shown = Json::array();
      if (!result.feedback.empty()) shown.push_back(encode(result.feedback.front()));
      Json transition{{"type", to_string(result.transition.type)}};
      if (result.transition.type == Transition::Type::Advance) transition["task"] = result.transition.task;
      reply(res, 200,
            Json{{"accepted", result.accepted},
                 {"feedback", shown},
                 {"remaining_feedback",
                  result.transition.type == Transition::Type::Stay && !result.feedback.empty()
                      ? static_cast<int>(result.feedback.size()) - 1
                      : 0},
                 {"transition", transition},
                 {"session", session_view(spec_of(s), s)}});
    }));

    http.Post(R"(/sessions/([^/]+)/reveal)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto [item, s] = store->reveal(req.matches[1]);
      reply(res, 200, Json{{"item", encode(item)}, {"session", session_view(spec_of(s), s)}});
    }));

    http.Get("/stats/usage", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::vector<Access> log;
      {
        std::lock_guard lock(log_mutex);
        std::ifstream in(options.data_dir / "access.jsonl");
        log = read_access_log(in);
      }
      reply(res, 200, encode(compute_usage(std::move(log))));
    }));

    http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        std::string code = res.status == 404 ? "not_found" : "http_error";
        res.set_content(Json{{"code", code}, {"message", "HTTP " + std::to_string(res.status)}, {"locus", ""}}.dump(),
                        "application/json");
      }
    });

    if (options.static_dir) http.set_mount_point("/", options.static_dir->string());
  }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  impl_->catalog = ExerciseCatalog::load_directory(impl_->options.exercise_dir);
  fs::create_directories(impl_->options.data_dir);
  impl_->store = std::make_unique<SessionStore>(impl_->options.data_dir, impl_->catalog);
  impl_->access_log.open(impl_->options.data_dir / "access.jsonl", std::ios::app);
  impl_->routes();
}

Server::~Server() = default;

int Server::bind() {
  auto& o = impl_->options;
  if (o.port == 0) {
    int port = impl_->http.bind_to_any_port(o.host);
    if (port < 0) throw Error("io_error", "cannot bind " + o.host, o.host);
    return port;
  }
  if (!impl_->http.bind_to_port(o.host, o.port))
    throw Error("io_error", "cannot bind " + o.host + ":" + std::to_string(o.port), o.host);
  return o.port;
}

void Server::listen() { impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace logicbench
