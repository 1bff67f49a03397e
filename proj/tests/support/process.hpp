#pragma once

#include <sys/types.h>

#include <string>
#include <vector>

namespace testsupport {

// A `logicbench serve --port 0` child process.
class ServerProcess {
 public:
  ServerProcess(const std::string& cli, const std::string& data_dir, const std::string& exercise_dir);
  ~ServerProcess();
  ServerProcess(const ServerProcess&) = delete;
  ServerProcess& operator=(const ServerProcess&) = delete;

  int port() const { return port_; }
  void kill_hard();  // SIGKILL, no chance to flush anything
  void terminate();  // SIGTERM and wait

 private:
  void reap();

  pid_t pid_ = -1;
  int out_fd_ = -1;
  int port_ = 0;
};

}  // namespace testsupport
