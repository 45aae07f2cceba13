#include "relsy/smt/sexp.hpp"

#include <cctype>

namespace relsy::smt {
namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skipWs() {
    while (!done()) {
      char c = peek();
      if (c == ';') {
        while (!done() && peek() != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        return;
      }
    }
  }
};

bool isAtomChar(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ';';
}

std::optional<Sexp> parseOne(Cursor& in) {
  in.skipWs();
  if (in.done()) return std::nullopt;
  if (in.peek() == '(') {
    ++in.pos;
    Sexp list;
    list.atom = false;
    for (;;) {
      in.skipWs();
      if (in.done()) return std::nullopt;
      if (in.peek() == ')') {
        ++in.pos;
        return list;
      }
      auto kid = parseOne(in);
      if (!kid) return std::nullopt;
      list.kids.push_back(std::move(*kid));
    }
  }
  if (in.peek() == ')') return std::nullopt;
  Sexp atom;
  size_t start = in.pos;
  while (!in.done() && isAtomChar(in.peek())) ++in.pos;
  if (in.pos == start) return std::nullopt;
  atom.text = in.text.substr(start, in.pos - start);
  return atom;
}

}  // namespace

std::optional<std::vector<Sexp>> parse_sexps(const std::string& text) {
  Cursor in{text};
  std::vector<Sexp> out;
  for (;;) {
    in.skipWs();
    if (in.done()) return out;
    auto s = parseOne(in);
    if (!s) return std::nullopt;
    out.push_back(std::move(*s));
  }
}

std::string sexp_to_string(const Sexp& s) {
  if (s.atom) return s.text;
  std::string out = "(";
  for (size_t i = 0; i < s.kids.size(); ++i) {
    if (i) out += ' ';
    out += sexp_to_string(s.kids[i]);
  }
  out += ')';
  return out;
}

}  // namespace relsy::smt
