#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace relsy {

struct SourceLoc {
  int line = 0;  // 1-based; 0 means "no position"
  int col = 0;
};

struct Diagnostic {
  SourceLoc loc;
  std::string message;
};

// Fatal front-end error (syntax error, unsupported construct, schema-level
// semantic error).  Non-fatal method-level findings go through validate()
// as Diagnostics instead.
class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, const std::string& message)
      : std::runtime_error(message), loc_(loc) {}
  SourceLoc loc() const { return loc_; }

 private:
  SourceLoc loc_;
};

// "file:line:col: message", the format the CLI prints to stderr.
inline std::string format_diag(const std::string& file, SourceLoc loc,
                               const std::string& message) {
  return file + ":" + std::to_string(loc.line) + ":" + std::to_string(loc.col) +
         ": " + message;
}

}  // namespace relsy
