#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>

namespace logicbench {

// Base of every error raised by the engine. `code` is a stable machine-readable
// identifier (snake_case); `locus` optionally names the offending element.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, std::string locus = {})
      : std::runtime_error(message), code_(std::move(code)), locus_(std::move(locus)) {}

  const std::string& code() const noexcept { return code_; }
  const std::string& locus() const noexcept { return locus_; }

 private:
  std::string code_;
  std::string locus_;
};

// Syntax errors carry the 0-based code-point offset and the set of tokens
// that would have been accepted there.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position, std::set<std::string> expected,
             std::string code = "syntax_error")
      : Error(std::move(code), message, std::to_string(position)),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::set<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::set<std::string> expected_;
};

}  // namespace logicbench
