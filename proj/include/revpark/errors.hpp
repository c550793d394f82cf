#pragma once

#include <stdexcept>
#include <string>

namespace revpark {

/// Scenario file could not be parsed; carries the 1-based offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

/// Scenario is well-formed but not plannable (e.g. start or goal in collision).
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace revpark
