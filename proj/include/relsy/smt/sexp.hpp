#pragma once

#include <optional>
#include <string>
#include <vector>

namespace relsy::smt {

// Generic s-expression: atoms keep their spelling verbatim.
struct Sexp {
  bool atom = true;
  std::string text;        // atom spelling
  std::vector<Sexp> kids;  // list elements

  bool operator==(const Sexp&) const = default;
};

// Parses a whole script into top-level s-expressions.  `;` comments run to end
// of line.  Returns nullopt on unbalanced parentheses or stray characters.
std::optional<std::vector<Sexp>> parse_sexps(const std::string& text);

// Canonical single-space rendering, used for comparison and diagnostics.
std::string sexp_to_string(const Sexp& s);

}  // namespace relsy::smt
