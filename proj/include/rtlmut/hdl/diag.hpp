#pragma once

#include <stdexcept>
#include <string>

namespace rtlmut::hdl {

enum class Severity { Error, Warning };

// Structured diagnostic record; line/column are 1-based, 0 means "no location"
// (elaboration errors that have no single source point).
struct Diag {
  Severity severity = Severity::Error;
  int line = 0;
  int column = 0;
  std::string message;

  std::string to_string() const {
    std::string s = severity == Severity::Error ? "error" : "warning";
    if (line > 0) s += ":" + std::to_string(line) + ":" + std::to_string(column);
    return s + ": " + message;
  }
};

class HdlError : public std::runtime_error {
public:
  explicit HdlError(Diag d) : std::runtime_error(d.to_string()), diag(std::move(d)) {}
  Diag diag;
};

[[noreturn]] inline void fail(std::string msg, int line = 0, int col = 0) {
  throw HdlError(Diag{Severity::Error, line, col, std::move(msg)});
}

}  // namespace rtlmut::hdl
